#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "cosym/field.hpp"
#include "cosym/integrate.hpp"

namespace cosym {

/// Structure constants of a finite-dimensional Lie algebra:
/// [xi_i, xi_j] = sum_k c[k][i][j] xi_k.
struct LieAlgebraSpec {
    std::size_t dim = 0;
    std::vector<double> c; // c[k*dim*dim + i*dim + j]

    LieAlgebraSpec() = default;
    explicit LieAlgebraSpec(std::size_t d) : dim(d), c(d * d * d, 0.0) {}

    static LieAlgebraSpec abelian(std::size_t d) { return LieAlgebraSpec(d); }
    /// so(3): c^k_ij = epsilon_ijk.
    static LieAlgebraSpec so3();

    double structure(std::size_t k, std::size_t i, std::size_t j) const {
        return c[k * dim * dim + i * dim + j];
    }
    void set_structure(std::size_t k, std::size_t i, std::size_t j, double v) {
        c[k * dim * dim + i * dim + j] = v;
    }

    /// Coefficients of [a, b] in the basis.
    Vec bracket(const Vec& a, const Vec& b) const;

    /// Max violation of antisymmetry and the Jacobi identity on the
    /// structure constants; construction requires <= 1e-12.
    double consistency_residual() const;
    void validate(double tol = 1e-12) const;
};

/// Lie algebra action represented through the momentum-map components:
/// the fundamental field of xi = sum a^i xi_i is X_{J_xi} with
/// J_xi = sum a^i J_i. Each J_i must satisfy R J_i = 0.
struct SymmetryAction {
    LieAlgebraSpec algebra;
    std::vector<ScalarField> J;
    DarbouxChart base_chart; // used when the action is zero-dimensional

    std::size_t dim() const { return J.size(); }
    const DarbouxChart& chart() const {
        return J.empty() ? base_chart : J.front().chart();
    }

    /// Momentum value (J_1 .. J_d) at the state.
    Vec momentum(const Vec& state) const;

    /// Fundamental field of the basis element i (zero t-component).
    FieldValue fundamental_field(std::size_t i, const Vec& state) const;

    /// Fundamental field of xi = sum coeffs[i] xi_i.
    FieldValue fundamental_field(const Vec& coeffs, const Vec& state) const;

    /// d x (2n+1) Jacobian of the momentum map at the state.
    Mat momentum_jacobian(const Vec& state) const;
};

struct MomentumMapReport {
    double max_form_residual = 0.0;   // iota_{xi_M} omega - dJ_xi on ker eta
    double max_reeb_residual = 0.0;   // R J_xi
    double max_eta_residual = 0.0;    // iota_{xi_M} eta
    double max_invariance_residual = 0.0; // xi_M h
    bool pass = false;
    std::size_t samples = 0;
};

/// Verifies the momentum-map axioms and h-invariance at the sample states.
MomentumMapReport verify_momentum_map(const SymmetryAction& action,
                                      const ScalarField& h,
                                      const std::vector<Vec>& sample_points,
                                      double tol);

struct DriftReport {
    std::vector<double> max_drift; // per momentum component
    double worst = 0.0;
};

/// Max drift of every momentum component along an integrated trajectory.
DriftReport conservation_along_flow(const SymmetryAction& action,
                                    const Trajectory& traj);

struct CocycleReport {
    Mat sigma;             // mean of {J_j, J_i} - J_[j,i] over the samples
    double max_deviation = 0.0; // across sample points
    bool constant = false;      // deviation within tolerance
};

/// Infinitesimal cocycle form  Sigma(xi_i, xi_j) = {J_j, J_i} - J_[j,i].
CocycleReport cocycle_form(const SymmetryAction& action,
                           const std::vector<Vec>& sample_points,
                           double tol = 1e-8);

struct TangencyReport {
    bool regular = false;      // momentum Jacobian has full rank d
    std::size_t rank = 0;
    std::size_t level_dim = 0; // dim ker DJ
    double level_set_residual = 0.0;
    double gap_item2 = 0.0;    // T J^{-1}(mu) vs (T Gx)^{perp omega}
    double gap_item3 = 0.0;    // (T J^{-1}(mu))^{perp omega} vs span{xi_M} + <R>
    bool pass = false;
};

/// Pointwise check of the tangency/orthogonality identities on the level set
/// of mu. Rank deficiency is reported, not fatal.
TangencyReport tangency_check(const SymmetryAction& action, const Vec& mu,
                              const Vec& state, double angle_tol = 1e-9);

/// User-supplied reduction chart: a parametrization sigma of the momentum
/// level set together with the declared reduced forms in reduced
/// coordinates. Reduction is verified against it, never constructed.
struct ReductionChart {
    Vec mu;                      // momentum value of the level set
    std::size_t level_dim = 0;   // level-set coordinates u (u[0] = t)
    std::size_t reduced_dim = 0; // reduced coordinates (index 0 = t)

    /// Parametrization of J^{-1}(mu): u -> ambient state, jet-evaluable.
    std::function<std::vector<Jet>(const std::vector<Jet>&)> sigma;
    /// Quotient projection in coordinates: u -> reduced coords.
    std::function<std::vector<Jet>(const std::vector<Jet>&)> project;
    /// Reduced two-form and one-form at reduced coordinates.
    std::function<Mat(const Vec&)> omega_mu;
    std::function<Vec(const Vec&)> eta_mu;
    /// Section of the quotient projection: reduced coords -> level-set
    /// coords, jet-evaluable (used to express the reduced Hamiltonian).
    std::function<std::vector<Jet>(const std::vector<Jet>&)> section;
    /// Declared chart-degeneracy loci.
    std::function<bool(const Vec& u)> degenerate;
    /// A second preimage over the same reduced point (group shift by s).
    std::function<Vec(const Vec& u, double s)> fiber_shift;

    Vec sigma_point(const Vec& u) const;
    Vec project_point(const Vec& u) const;
    /// Jacobian of sigma at u (ambient_dim x level_dim).
    Mat sigma_jacobian(const Vec& u) const;
    /// Jacobian of the projection at u (reduced_dim x level_dim).
    Mat project_jacobian(const Vec& u) const;
};

struct ReductionReport {
    double max_omega_residual = 0.0; // sigma*omega vs project*omega_mu
    double max_eta_residual = 0.0;
    double max_momentum_residual = 0.0; // |J(sigma(u)) - mu|
    bool pass = false;
    std::size_t samples = 0;
};

/// Pulls the ambient forms back through sigma and compares with the pullback
/// of the declared reduced forms through the quotient projection.
/// Evaluation at a declared degeneracy locus throws DomainError.
ReductionReport verify_reduction(const ReductionChart& chart,
                                 const SymmetryAction& action,
                                 const std::vector<Vec>& sample_us, double tol);

/// k_mu(u) := h(sigma(u)) as a field on the reduced coordinates;
/// well-definedness is asserted by comparing two preimages per sample.
ScalarField reduced_hamiltonian(const ReductionChart& chart,
                                const ScalarField& h,
                                const std::vector<Vec>& check_us = {},
                                double tol = 1e-10);

/// Evolution field of the reduced Hamiltonian with respect to the declared
/// reduced forms: dt/ds = 1, spatial part solves iota_X omega_mu = d k.
Vec reduced_evolution_field(const ReductionChart& chart, const ScalarField& k,
                            const Vec& reduced_state);

} // namespace cosym
