#pragma once

#include <functional>
#include <string>
#include <vector>

#include "cosym/equilibria.hpp"

namespace cosym {

/// Orthonormal basis (Euclidean in Darboux coordinates) of a complement of
/// the gauge directions span{xi_M} inside ker DJ intersected with ker eta,
/// at a fixed (t, z_e). Vectors are full-dimensional with zero t-component.
struct SliceBasis {
    double t = 0.0;
    Vec z_e;
    std::vector<Vec> basis;

    std::size_t dim() const { return basis.size(); }
};

SliceBasis build_slice(const ScalarField& h, const SymmetryAction& action,
                       const REPCandidate& candidate, const Vec& mu, double t);

/// Reduced Hessian  (1/2) S^T Hess(h_xi(t)) S  on the slice.
Mat reduced_hessian(const ScalarField& h, const SymmetryAction& action,
                    const REPCandidate& candidate, const SliceBasis& slice,
                    double t);

struct SpectralScan {
    std::vector<double> times;
    std::vector<double> lambda_min;
    std::vector<double> lambda_max;
    double inf_lambda_min = 0.0;
    double sup_lambda_max = 0.0;
    /// Largest grid variation of lambda_max; a (near-)constant upper
    /// eigenvalue is the witness that the grid sup extends to all t >= t0.
    double lambda_max_variation = 0.0;

    /// Sampled third-derivative bound (1/3!) max_{|alpha|<=3} |D^alpha h|
    /// over the slice-directions ball; estimate, stability-checked by
    /// doubling the sample.
    double c_estimate = 0.0;
    double c_estimate_refined = 0.0;
    double ball_radius = 0.0;
    std::size_t ball_samples = 0;

    double dhdt_max = 0.0; // max of dH_{z_e}/dt over ball samples and times
    std::size_t slice_dim = 0;

    /// CSV `t,lambda_min,lambda_max`, 17 significant digits.
    std::string to_csv() const;
};

SpectralScan spectral_scan(const ScalarField& h, const SymmetryAction& action,
                           const REPCandidate& candidate, const Vec& mu,
                           const std::vector<double>& time_grid,
                           double neighborhood_radius,
                           std::size_t ball_samples = 200);

enum class StabilityKind {
    stable_from_t0,
    uniformly_stable_from_t0,
    indeterminate,
};

/// Verdict with the witnessing constants. The criteria are sufficient
/// conditions only; no verdict ever claims instability.
struct StabilityVerdict {
    StabilityKind kind = StabilityKind::indeterminate;
    double t0 = 0.0;
    double lambda = 0.0;          // 0 < lambda < inf lambda_min witness
    double Lambda = 0.0;          // sup lambda_max < Lambda witness
    double c = 0.0;               // sampled third-derivative bound
    double derived_lambda_bound = 0.0; // 6 c n^2 spectrum cap implied by c
    std::string notes;

    std::string to_text() const;
};

StabilityVerdict classify(const SpectralScan& scan);

/// dM/dt + sum dM/dx^i X^i at the point (the Lyapunov derivative along a
/// time-dependent field).
double mdot(const ScalarField& m,
            const std::function<FieldValue(const Vec&)>& field,
            const Vec& state);

struct LpdfReport {
    std::vector<double> radii;
    std::vector<double> inf_envelope; // inf over shell and times per radius
    std::vector<double> sup_envelope;
    bool lpdf_witness = false;       // positive, nondecreasing inf envelope
    bool decrescent_witness = false; // finite, nondecreasing sup envelope
    double max_center_value = 0.0;   // |M(t, x_e)| over the grid (must be ~0)
};

/// Empirical witnesses for the locally-positive-definite and decrescent
/// properties by shell sampling. M is a function on R x P for an arbitrary
/// phase space dimension (x_e fixes it); a failed witness does not disprove
/// either property.
LpdfReport empirical_lpdf_check(
    const std::function<double(double, const Vec&)>& m, const Vec& x_e,
    const std::vector<double>& radii, const std::vector<double>& time_grid,
    std::size_t shell_samples = 64);

} // namespace cosym
