#pragma once

#include <array>
#include <string>
#include <vector>

#include "cosym/field.hpp"
#include "cosym/integrate.hpp"

namespace cosym {

/// Circular restricted three-body problem in the rotating-primaries setup:
/// heavy mass mu at radius r1 = 1 - mu, light mass 1 - mu at radius r2 = mu,
/// unit separation, angular frequency varpi = +-1. The convention r1 small
/// presumes mu in (1/2, 1).
struct ThreeBodyParams {
    double mu = 0.99;
    double varpi = 1.0;
    double collision_guard = 1e-6; // minimum distance to either primary

    double r1() const { return 1.0 - mu; }
    double r2() const { return mu; }
    void validate() const;
};

/// Chart (t, r, phi, p_r, p_phi): q1 = r, q2 = phi, p1 = p_r, p2 = p_phi.
DarbouxChart three_body_chart();

/// h = p_r^2/2 + p_phi^2/(2 r^2) - mu / d1 - (1-mu) / d2 with
/// d1^2 = r^2 + r1^2 + 2 r r1 cos(phi - varpi t),
/// d2^2 = r^2 + r2^2 - 2 r r2 cos(phi - varpi t).
/// Throws CollisionError inside the separation guard.
ScalarField three_body_hamiltonian(const ThreeBodyParams& params);

/// Upsilon = t + varpi p_phi; its gradient field is the rotating-frame
/// symmetry (1, 0, varpi, 0, 0) and R Upsilon = 1.
ScalarField upsilon(const ThreeBodyParams& params);

/// Reduction to the rotating frame: pi(t, r, phi, p_r, p_phi) =
/// (r, phi - varpi t, p_r, p_phi) with the autonomous reduced Hamiltonian
/// k = -varpi p_phi + p_r^2/2 + p_phi^2/(2 r^2) + potential(r, phi').
struct ReducedThreeBody {
    ThreeBodyParams params;
    DarbouxChart chart; // (t, r, phi', p_r, p_phi); k is t-independent
    ScalarField k;

    /// Project an ambient state; the t slot is carried through unchanged.
    Vec project(const Vec& ambient_state) const;
    /// Jacobian of the spatial projection (4 x 5, rows r, phi', p_r, p_phi).
    Mat projection_jacobian(const Vec& ambient_state) const;
};

ReducedThreeBody reduce(const ThreeBodyParams& params);

/// Residuals of the cosymplectic-to-symplectic reduction identities at
/// sample ambient states.
struct ReductionIdentityReport {
    double max_k_formula_residual = 0.0;  // pi*k = h - Y/c - int (grad Y)(h - Y/c) dt
    double max_pushforward_residual = 0.0; // pi_*(R + X_h) vs X_k
    double max_time_dependence = 0.0;      // dk/dt through the projection
    double max_source_position_dependence = 0.0; // (grad Y)(h - Y/c) across points
    bool pass = false;
};

ReductionIdentityReport verify_reduction_identities(
    const ReducedThreeBody& reduced, const std::vector<Vec>& ambient_samples,
    double tol);

enum class LagrangeLabel { L1, L2, L3, L4, L5 };
std::string to_string(LagrangeLabel label);

enum class AngleMode { k0, k1, triangular };

struct LagrangePoint {
    LagrangeLabel label;
    double r = 0.0;
    AngleMode angle_mode = AngleMode::k0;
    double delta_or_k = 0.0; // k in {0, 1} or the triangular angle Delta
    double p_r = 0.0;        // exactly zero
    double p_phi = 0.0;      // varpi * r^2
    double residual_quintic = 0.0; // |P(r)| of the defining polynomial
    double residual_field = 0.0;   // max ||E_h - grad Upsilon|| (filled later)

    /// Rotating equilibrium embedded at time t.
    Vec embed(const ThreeBodyParams& params, double t) const;
};

/// Quintic coefficients of P_+- (descending powers, degree 5 first):
/// r^5 + (2-4mu) r^4 + (6mu^2-6mu+1) r^3 + (-4mu^3+6mu^2-(3+-1)mu+-1) r^2
/// + (mu^4-2mu^3+(3+-2)mu^2 -+ (4mu-2)) r - mu^3 +- (1-mu)^3.
std::array<double, 6> quintic_coefficients(const ThreeBodyParams& params,
                                           int sign);
/// Coefficient formula at a raw mass value (no range validation); the
/// quintics have the triple root r = 1 at mu = 1.
std::array<double, 6> quintic_coefficients_mu(double mu, int sign);

/// Coefficients (descending) of the cleared k = 1 force-balance polynomial
/// (the L3 equation) in r, for delta = 1 - mu.
std::array<double, 6> l3_polynomial(const ThreeBodyParams& params);

/// All positive real roots of a polynomial on [lo, hi]: uniform scan
/// (step 1e-3) for sign changes, bisection to width 1e-13, Newton polish.
std::vector<double> polynomial_roots(const std::array<double, 6>& coeffs,
                                     double lo, double hi);
double polynomial_eval(const std::array<double, 6>& coeffs, double r);

/// L1, L2 from the quintics near 1 -+ ((1-mu)/3)^(1/3); L3 from the k = 1
/// polynomial. Throws if a bracket scan finds no root.
std::vector<LagrangePoint> solve_collinear(const ThreeBodyParams& params);

/// L4, L5 at r = sqrt(1 - mu(1-mu)), Delta = +-acos((mu - 1/2)/r); both
/// primaries at unit distance.
std::vector<LagrangePoint> solve_triangular(const ThreeBodyParams& params);

/// Count of positive roots of the minus branch of the k = 1 equation on
/// [lo, hi] (expected zero).
std::size_t l3_minus_branch_root_count(const ThreeBodyParams& params,
                                       double lo = 1e-3, double hi = 3.0);

struct GradientRepResidual {
    double field_residual = 0.0; // max over times of ||(R + X_h) - grad Y||
    double literal_residual = 0.0; // || grad h - grad Y || (Def-form; differs at
                                   // the collinear points where R h = 0)
};

GradientRepResidual gradient_rep_residual(const ThreeBodyParams& params,
                                          const LagrangePoint& point,
                                          const std::vector<double>& times);

struct HillL3Report {
    double hill_l1 = 0.0; // 1 - ((1-mu)/3)^(1/3)
    double hill_l2 = 0.0; // 1 + ((1-mu)/3)^(1/3)
    double l3 = 0.0;      // 1 + 5 (1-mu)/12
    std::vector<double> deltas;   // {1e-2, 1e-3, 1e-4}
    std::vector<double> l1_error; // |root - approx| per delta
    std::vector<double> l2_error;
    std::vector<double> l3_error;
    std::vector<double> l1_ratio; // error / delta^(2/3)
    std::vector<double> l2_ratio;
};

HillL3Report hill_and_l3_approx(double mu);

/// CSV `label,r,delta_or_k,p_phi,residual_field,residual_quintic`.
std::string lagrange_csv(const std::vector<LagrangePoint>& points);

} // namespace cosym
