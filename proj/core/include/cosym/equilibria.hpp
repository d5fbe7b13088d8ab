#pragma once

#include <functional>
#include <string>
#include <vector>

#include "cosym/symmetry.hpp"

namespace cosym {

/// Certified relative-equilibrium candidate: a spatial point z_e together
/// with the multiplier curve xi(t) sampled on the time grid and the field
/// residual ||X_h - xi(t)_M|| per time.
struct REPCandidate {
    Vec z_e;                       // spatial part, length 2n
    std::vector<double> times;
    std::vector<Vec> xi;           // multiplier per time, length d
    std::vector<double> residuals; // certification residual per time
    bool certified = false;
    double tol = 0.0;
    std::size_t newton_iterations = 0;

    double max_residual() const;
    Vec xi_at(double t) const; // nearest grid entry

    /// Structured text block, 17 significant digits.
    std::string to_text() const;
};

/// Chebyshev-distributed default grid for "for every t" certification.
std::vector<double> chebyshev_times(double t0, double t1, std::size_t count = 9);

/// Joint Newton solve of the critical-point system at times[0]:
///   spatial gradient of (h - sum xi^i J_i) = 0   (2n rows)
///   least-squares normal equations pinning xi    (d rows)
/// followed by per-time linear least squares for xi(t) at fixed z_e.
/// Degenerate KKT matrices (gauge directions) are handled by damped
/// pseudo-inverse steps.
REPCandidate find_rep(const ScalarField& h, const SymmetryAction& action,
                      const Vec& z0, const std::vector<double>& times,
                      double tol);

/// Max over times of || X_h - sum xi^i(t) X_{J_i} || at (t, z).
double rep_residual(const ScalarField& h, const SymmetryAction& action,
                    const Vec& z, const std::function<Vec(double)>& xi_of_t,
                    const std::vector<double>& times);

/// Second variation of h_xi(t) = h - sum xi^i(t) (J_i - J_i(t, z_e)) in the
/// 2n spatial coordinates at (t, z_e).
struct SecondVariation {
    double t = 0.0;
    Mat matrix; // 2n x 2n symmetric
};

SecondVariation second_variation(const ScalarField& h,
                                 const SymmetryAction& action,
                                 const REPCandidate& candidate, double t);

struct GaugeKernelReport {
    bool regular = false;
    double max_pairing = 0.0; // |d2 h_xi (zeta_M, v)| over gauge x kernel pairs
    bool pass = false;
    std::size_t pairs = 0;
};

/// Checks that every gauge direction pairs to zero with ker DJ inside ker eta
/// under the second variation.
GaugeKernelReport gauge_kernel_check(const ScalarField& h,
                                     const SymmetryAction& action,
                                     const REPCandidate& candidate,
                                     const Vec& mu, double t,
                                     double tol = 1e-8);

} // namespace cosym
