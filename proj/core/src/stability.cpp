#include "cosym/stability.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "cosym/rng.hpp"

namespace cosym {

namespace {

Vec full_state(double t, const Vec& z) {
    Vec x(z.size() + 1);
    x[0] = t;
    std::copy(z.begin(), z.end(), x.begin() + 1);
    return x;
}

} // namespace

SliceBasis build_slice(const ScalarField& h, const SymmetryAction& action,
                       const REPCandidate& candidate, const Vec& mu, double t) {
    (void)h;
    const Vec state = full_state(t, candidate.z_e);
    const std::size_t full = state.size();
    if (!mu.empty() && max_abs_diff(action.momentum(state), mu) > 1e-8)
        throw Error("build_slice: candidate is not on the mu level set");

    // ker DJ intersect ker eta: stack the momentum Jacobian on top of eta.
    Mat constraints(action.dim() + 1, full);
    const Mat dj = action.momentum_jacobian(state);
    for (std::size_t i = 0; i < action.dim(); ++i)
        for (std::size_t k = 0; k < full; ++k) constraints(i, k) = dj(i, k);
    constraints(action.dim(), 0) = 1.0; // eta = dt

    if (action.dim() > 0) {
        Svd dec = svd(dj.transposed());
        std::size_t rank = 0;
        const double smax = dec.s.empty() ? 0.0 : dec.s[0];
        for (double s : dec.s)
            if (s > 1e-10 * std::max(1.0, smax)) ++rank;
        if (rank < action.dim())
            throw Error("build_slice: momentum map rank " +
                        std::to_string(rank) + " < " +
                        std::to_string(action.dim()) + " at the candidate");
    }

    const std::vector<Vec> kernel = nullspace(constraints);

    // Remove the gauge directions by orthogonal projection inside the kernel.
    std::vector<Vec> gauge;
    for (std::size_t i = 0; i < action.dim(); ++i)
        gauge.push_back(action.fundamental_field(i, state).components);
    const std::vector<Vec> gauge_q = orthonormal_span(gauge);

    std::vector<Vec> projected;
    for (const Vec& v : kernel) {
        Vec r = v;
        for (const Vec& g : gauge_q) {
            const double c = dot(g, v);
            for (std::size_t k = 0; k < r.size(); ++k) r[k] -= c * g[k];
        }
        projected.push_back(r);
    }
    SliceBasis slice;
    slice.t = t;
    slice.z_e = candidate.z_e;
    slice.basis = orthonormal_span(projected, 1e-9);
    return slice;
}

Mat reduced_hessian(const ScalarField& h, const SymmetryAction& action,
                    const REPCandidate& candidate, const SliceBasis& slice,
                    double t) {
    const SecondVariation sv = second_variation(h, action, candidate, t);
    const std::size_t k = slice.dim();
    const std::size_t sd = candidate.z_e.size();
    Mat m(k, k);
    for (std::size_t a = 0; a < k; ++a) {
        Vec sa(sd);
        for (std::size_t i = 0; i < sd; ++i) sa[i] = slice.basis[a][i + 1];
        const Vec hsa = sv.matrix * sa;
        for (std::size_t b = 0; b < k; ++b) {
            Vec sb(sd);
            for (std::size_t i = 0; i < sd; ++i) sb[i] = slice.basis[b][i + 1];
            m(a, b) = 0.5 * dot(hsa, sb);
        }
    }
    for (std::size_t a = 0; a < k; ++a)
        for (std::size_t b = a + 1; b < k; ++b) {
            const double v = 0.5 * (m(a, b) + m(b, a));
            m(a, b) = v;
            m(b, a) = v;
        }
    return m;
}

SpectralScan spectral_scan(const ScalarField& h, const SymmetryAction& action,
                           const REPCandidate& candidate, const Vec& mu,
                           const std::vector<double>& time_grid,
                           double neighborhood_radius,
                           std::size_t ball_samples) {
    if (time_grid.empty()) throw Error("spectral_scan: empty time grid");
    SpectralScan scan;
    scan.times = time_grid;
    scan.ball_radius = neighborhood_radius;
    scan.ball_samples = ball_samples;

    double inf_min = 0.0, sup_max = 0.0, lmax_lo = 0.0, lmax_hi = 0.0;
    bool first = true;
    SliceBasis slice0;
    for (double t : time_grid) {
        const SliceBasis slice = build_slice(h, action, candidate, mu, t);
        const Mat m = reduced_hessian(h, action, candidate, slice, t);
        const SymEig eig = jacobi_eigensymmetric(m);
        const double lmin = eig.values.empty() ? 0.0 : eig.values.front();
        const double lmax = eig.values.empty() ? 0.0 : eig.values.back();
        scan.lambda_min.push_back(lmin);
        scan.lambda_max.push_back(lmax);
        if (first) {
            inf_min = lmin;
            sup_max = lmax;
            lmax_lo = lmax_hi = lmax;
            slice0 = slice;
            scan.slice_dim = slice.dim();
            first = false;
        } else {
            inf_min = std::min(inf_min, lmin);
            sup_max = std::max(sup_max, lmax);
            lmax_lo = std::min(lmax_lo, lmax);
            lmax_hi = std::max(lmax_hi, lmax);
        }
    }
    scan.inf_lambda_min = inf_min;
    scan.sup_lambda_max = sup_max;
    scan.lambda_max_variation = lmax_hi - lmax_lo;

    // Third-derivative bound c over a ball in slice directions, via Halton
    // samples; |alpha| <= 2 from the jets, |alpha| = 3 by central differences
    // of the jet Hessian along slice directions (step 1e-3).
    const double t0 = time_grid.front();
    const Vec base = full_state(t0, candidate.z_e);
    const std::size_t k = slice0.dim();
    // center values h(t, z_e) per grid time; the |alpha| = 0 term is the
    // centered difference h(t, x) - h(t, z_e)
    std::vector<double> center_value;
    for (double t : time_grid)
        center_value.push_back(h.value(full_state(t, candidate.z_e)));

    auto state_at = [&](const Vec& coeffs, double t) {
        Vec x = full_state(t, candidate.z_e);
        for (std::size_t a = 0; a < k; ++a)
            for (std::size_t i = 0; i < x.size(); ++i)
                x[i] += coeffs[a] * slice0.basis[a][i];
        x[0] = t;
        return x;
    };

    auto sample_c = [&](std::size_t count) {
        double worst = 0.0;
        const double fd = 1e-3;
        for (std::size_t s = 0; s < count; ++s) {
            const std::vector<double> unit = halton_point(s, k);
            Vec coeffs(k);
            double norm2 = 0.0;
            for (std::size_t a = 0; a < k; ++a) {
                coeffs[a] = 2.0 * unit[a] - 1.0;
                norm2 += coeffs[a] * coeffs[a];
            }
            const double r = std::sqrt(std::max(norm2, 1e-30));
            const double shrink =
                neighborhood_radius * std::pow(halton(s, 7), 1.0 / k) / r;
            for (auto& c : coeffs) c *= shrink;

            for (std::size_t ti = 0; ti < time_grid.size(); ++ti) {
                const double t = time_grid[ti];
                const Vec x = state_at(coeffs, t);
                const Jet2 j = h.eval(x);
                // |alpha| = 0..2 along slice directions
                worst = std::max(worst, std::abs(j.value - center_value[ti]));
                for (std::size_t a = 0; a < k; ++a) {
                    double g = 0.0;
                    for (std::size_t i = 0; i < x.size(); ++i)
                        g += j.gradient[i] * slice0.basis[a][i];
                    worst = std::max(worst, std::abs(g));
                    for (std::size_t b = 0; b < k; ++b) {
                        double hab = 0.0;
                        for (std::size_t i = 0; i < x.size(); ++i)
                            for (std::size_t l = 0; l < x.size(); ++l)
                                hab += slice0.basis[a][i] * j.hess(i, l) *
                                       slice0.basis[b][l];
                        worst = std::max(worst, std::abs(hab));
                    }
                }
                // |alpha| = 3: d/ds of the slice Hessian along direction c.
                for (std::size_t cdir = 0; cdir < k; ++cdir) {
                    Vec cp = coeffs, cm = coeffs;
                    cp[cdir] += fd;
                    cm[cdir] -= fd;
                    const Jet2 jp = h.eval(state_at(cp, t));
                    const Jet2 jm = h.eval(state_at(cm, t));
                    for (std::size_t a = 0; a < k; ++a)
                        for (std::size_t b = a; b < k; ++b) {
                            double hp = 0.0, hm = 0.0;
                            for (std::size_t i = 0; i < base.size(); ++i)
                                for (std::size_t l = 0; l < base.size(); ++l) {
                                    hp += slice0.basis[a][i] * jp.hess(i, l) *
                                          slice0.basis[b][l];
                                    hm += slice0.basis[a][i] * jm.hess(i, l) *
                                          slice0.basis[b][l];
                                }
                            worst = std::max(worst,
                                             std::abs(hp - hm) / (2.0 * fd));
                        }
                }
            }
        }
        return worst / 6.0;
    };
    scan.c_estimate = sample_c(ball_samples);
    scan.c_estimate_refined = sample_c(2 * ball_samples);

    // dH_{z_e}/dt = dh/dt(t, x) - dh/dt(t, z_e) over the same ball.
    double dhdt = -1e300;
    for (std::size_t s = 0; s < ball_samples; ++s) {
        const std::vector<double> unit = halton_point(s, k);
        Vec coeffs(k);
        for (std::size_t a = 0; a < k; ++a)
            coeffs[a] = neighborhood_radius * (2.0 * unit[a] - 1.0) /
                        std::sqrt(static_cast<double>(k));
        for (double t : time_grid) {
            const double dcenter = h.time_derivative(full_state(t, candidate.z_e));
            const double dx = h.time_derivative(state_at(coeffs, t));
            dhdt = std::max(dhdt, dx - dcenter);
        }
    }
    scan.dhdt_max = dhdt;
    return scan;
}

std::string SpectralScan::to_csv() const {
    std::ostringstream os;
    os.precision(17);
    os << "t,lambda_min,lambda_max\n";
    for (std::size_t i = 0; i < times.size(); ++i)
        os << times[i] << "," << lambda_min[i] << "," << lambda_max[i] << "\n";
    return os.str();
}

StabilityVerdict classify(const SpectralScan& scan) {
    StabilityVerdict v;
    v.t0 = scan.times.empty() ? 0.0 : scan.times.front();
    v.c = scan.c_estimate;
    const double n2 = static_cast<double>(scan.slice_dim * scan.slice_dim);
    v.derived_lambda_bound = 6.0 * scan.c_estimate * n2;

    const bool positive = scan.inf_lambda_min > 0.0;
    const bool c_finite = std::isfinite(scan.c_estimate) &&
                          std::isfinite(scan.c_estimate_refined);
    const bool c_stable =
        c_finite && (scan.c_estimate_refined <=
                     1.2 * std::max(scan.c_estimate, 1e-300)) &&
        (scan.c_estimate <= 1.2 * std::max(scan.c_estimate_refined, 1e-300));
    const bool descending = scan.dhdt_max <= 1e-12;

    if (!(positive && c_stable && descending)) {
        v.kind = StabilityKind::indeterminate;
        std::ostringstream os;
        os << "conditions not witnessed:";
        if (!positive) os << " inf lambda_min = " << scan.inf_lambda_min << " <= 0;";
        if (!c_stable) os << " c estimate unstable under refinement;";
        if (!descending) os << " max dH/dt = " << scan.dhdt_max << " > 0;";
        v.notes = os.str();
        return v;
    }

    v.lambda = 0.5 * scan.inf_lambda_min;
    v.kind = StabilityKind::stable_from_t0;

    // The grid sup witnesses a Lambda for all t >= t0 only when the scan
    // shows lambda_max constant across the grid; otherwise the finite grid
    // cannot certify the upper bound on the whole interval.
    const double scale = std::max(std::abs(scan.sup_lambda_max), 1.0);
    if (scan.lambda_max_variation <= 1e-9 * scale) {
        v.kind = StabilityKind::uniformly_stable_from_t0;
        v.Lambda = 2.0 * std::max(scan.sup_lambda_max, 0.0);
        if (v.Lambda == 0.0) v.Lambda = 1.0;
        v.notes = "lambda_max constant over the grid; derived bound 6cn^2 = " +
                  std::to_string(v.derived_lambda_bound);
    } else {
        v.notes = "lambda_max varies over the grid (" +
                  std::to_string(scan.lambda_max_variation) +
                  "); no uniform witness";
    }
    return v;
}

std::string StabilityVerdict::to_text() const {
    std::ostringstream os;
    os.precision(17);
    os << "verdict ";
    switch (kind) {
    case StabilityKind::stable_from_t0: os << "stable_from_t0"; break;
    case StabilityKind::uniformly_stable_from_t0:
        os << "uniformly_stable_from_t0";
        break;
    case StabilityKind::indeterminate: os << "indeterminate"; break;
    }
    os << "\nt0 " << t0 << "\nlambda " << lambda << "\nLambda " << Lambda
       << "\nc " << c << "\nderived_lambda_bound " << derived_lambda_bound << "\nnotes "
       << notes << "\n";
    return os.str();
}

double mdot(const ScalarField& m,
            const std::function<FieldValue(const Vec&)>& field,
            const Vec& state) {
    const Jet2 jm = m.eval(state);
    const FieldValue x = field(state);
    double out = jm.gradient[0];
    for (std::size_t i = 1; i < state.size(); ++i)
        out += jm.gradient[i] * x.components[i];
    return out;
}

LpdfReport empirical_lpdf_check(
    const std::function<double(double, const Vec&)>& m, const Vec& x_e,
    const std::vector<double>& radii, const std::vector<double>& time_grid,
    std::size_t shell_samples) {
    LpdfReport r;
    r.radii = radii;
    const std::size_t sd = x_e.size();

    for (double t : time_grid)
        r.max_center_value =
            std::max(r.max_center_value, std::abs(m(t, x_e)));

    for (double radius : radii) {
        double inf_v = 1e300, sup_v = -1e300;
        for (std::size_t s = 0; s < shell_samples; ++s) {
            // Direction from the Halton cube mapped through a cube-to-sphere
            // normalization.
            const std::vector<double> u = halton_point(s, sd);
            Vec dir(sd);
            double n2 = 0.0;
            for (std::size_t i = 0; i < sd; ++i) {
                dir[i] = 2.0 * u[i] - 1.0;
                n2 += dir[i] * dir[i];
            }
            if (n2 < 1e-12) {
                dir[0] = 1.0;
                n2 = 1.0;
            }
            const double inv = radius / std::sqrt(n2);
            Vec x = x_e;
            for (std::size_t i = 0; i < sd; ++i) x[i] += dir[i] * inv;
            for (double t : time_grid) {
                const double v = m(t, x);
                inf_v = std::min(inf_v, v);
                sup_v = std::max(sup_v, v);
            }
        }
        r.inf_envelope.push_back(inf_v);
        r.sup_envelope.push_back(sup_v);
    }

    bool lpdf = r.max_center_value <= 1e-12;
    for (std::size_t i = 0; i < r.inf_envelope.size(); ++i) {
        if (r.inf_envelope[i] <= 1e-14) lpdf = false;
        if (i > 0 && r.inf_envelope[i] < r.inf_envelope[i - 1] - 1e-14)
            lpdf = false;
    }
    r.lpdf_witness = lpdf;

    bool dec = true;
    for (std::size_t i = 0; i < r.sup_envelope.size(); ++i) {
        if (!std::isfinite(r.sup_envelope[i])) dec = false;
        if (i > 0 && r.sup_envelope[i] < r.sup_envelope[i - 1] - 1e-14)
            dec = false;
    }
    r.decrescent_witness = dec;
    return r;
}

} // namespace cosym
