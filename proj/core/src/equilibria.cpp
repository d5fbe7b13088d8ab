#include "cosym/equilibria.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace cosym {

double REPCandidate::max_residual() const {
    double m = 0.0;
    for (double r : residuals) m = std::max(m, r);
    return m;
}

Vec REPCandidate::xi_at(double t) const {
    std::size_t best = 0;
    for (std::size_t i = 1; i < times.size(); ++i)
        if (std::abs(times[i] - t) < std::abs(times[best] - t)) best = i;
    return xi[best];
}

std::string REPCandidate::to_text() const {
    std::ostringstream os;
    os.precision(17);
    os << "certified " << (certified ? 1 : 0) << "\n";
    os << "tolerance " << tol << "\n";
    os << "z_e";
    for (double v : z_e) os << " " << v;
    os << "\n";
    for (std::size_t k = 0; k < times.size(); ++k) {
        os << "t " << times[k] << " xi";
        for (double v : xi[k]) os << " " << v;
        os << " residual " << residuals[k] << "\n";
    }
    return os.str();
}

std::vector<double> chebyshev_times(double t0, double t1, std::size_t count) {
    std::vector<double> ts(count);
    for (std::size_t k = 0; k < count; ++k) {
        const double theta = M_PI * (2.0 * k + 1.0) / (2.0 * count);
        ts[k] = 0.5 * (t0 + t1) - 0.5 * (t1 - t0) * std::cos(theta);
    }
    std::sort(ts.begin(), ts.end());
    return ts;
}

namespace {

Vec full_state(double t, const Vec& z) {
    Vec x(z.size() + 1);
    x[0] = t;
    std::copy(z.begin(), z.end(), x.begin() + 1);
    return x;
}

/// Columns = spatial parts of the fundamental fields at (t, z).
Mat fundamental_matrix(const SymmetryAction& action, const Vec& state) {
    const std::size_t sd = state.size() - 1;
    Mat a(sd, action.dim());
    for (std::size_t i = 0; i < action.dim(); ++i) {
        const FieldValue xi = action.fundamental_field(i, state);
        for (std::size_t k = 0; k < sd; ++k)
            a(k, i) = xi.components[k + 1];
    }
    return a;
}

Vec spatial(const FieldValue& v) {
    return Vec(v.components.begin() + 1, v.components.end());
}

/// Residual system F(z, xi): spatial gradient of h - xi.J, then the normal
/// equations A^T A xi - A^T b that pin xi as the least-squares multiplier.
Vec rep_system(const ScalarField& h, const SymmetryAction& action, double t,
               const Vec& z, const Vec& xi) {
    const Vec state = full_state(t, z);
    const std::size_t sd = z.size();
    const std::size_t d = action.dim();
    Vec f(sd + d, 0.0);

    Vec grad = h.spatial_gradient(state);
    for (std::size_t i = 0; i < d; ++i) {
        const Vec gj = action.J[i].spatial_gradient(state);
        for (std::size_t k = 0; k < sd; ++k) grad[k] -= xi[i] * gj[k];
    }
    std::copy(grad.begin(), grad.end(), f.begin());

    if (d > 0) {
        const Mat a = fundamental_matrix(action, state);
        const Vec b = spatial(hamiltonian_field(h, state));
        const Mat at = a.transposed();
        const Vec ata_xi = at * (a * xi);
        const Vec atb = at * b;
        for (std::size_t i = 0; i < d; ++i) f[sd + i] = ata_xi[i] - atb[i];
    }
    return f;
}

} // namespace

REPCandidate find_rep(const ScalarField& h, const SymmetryAction& action,
                      const Vec& z0, const std::vector<double>& times,
                      double tol) {
    if (times.empty()) throw Error("find_rep: empty time grid");
    const std::size_t sd = z0.size();
    const std::size_t d = action.dim();
    const double t0 = times.front();

    Vec z = z0;
    Vec xi(d, 0.0);
    if (d > 0) {
        const Vec state = full_state(t0, z);
        xi = lstsq(fundamental_matrix(action, state),
                   spatial(hamiltonian_field(h, state)));
    }

    REPCandidate cand;
    cand.tol = tol;

    const std::size_t max_newton = 50;
    const double fd_step = 1e-6;
    for (std::size_t it = 0; it < max_newton; ++it) {
        cand.newton_iterations = it;
        const Vec f = rep_system(h, action, t0, z, xi);
        const double fn = norm(f);
        if (fn <= tol * 1e-2 || fn <= 1e-14) break;

        // Finite-difference Jacobian over (z, xi); the KKT matrix is rank
        // deficient along gauge directions, so use the pseudo-inverse.
        Mat jac(sd + d, sd + d);
        for (std::size_t j = 0; j < sd + d; ++j) {
            Vec zp = z, zm = z, xp = xi, xm = xi;
            if (j < sd) {
                zp[j] += fd_step;
                zm[j] -= fd_step;
            } else {
                xp[j - sd] += fd_step;
                xm[j - sd] -= fd_step;
            }
            const Vec fp = rep_system(h, action, t0, zp, xp);
            const Vec fm = rep_system(h, action, t0, zm, xm);
            for (std::size_t i = 0; i < sd + d; ++i)
                jac(i, j) = (fp[i] - fm[i]) / (2.0 * fd_step);
        }
        const Vec step = pinv_solve(jac, f, 1e-10);

        // Damped update: halve until the residual decreases (max 30 halvings).
        double alpha = 1.0;
        bool accepted = false;
        for (int halving = 0; halving < 30; ++halving) {
            Vec zn = z, xn = xi;
            for (std::size_t k = 0; k < sd; ++k) zn[k] -= alpha * step[k];
            for (std::size_t k = 0; k < d; ++k) xn[k] -= alpha * step[sd + k];
            try {
                if (norm(rep_system(h, action, t0, zn, xn)) < fn) {
                    z = zn;
                    xi = xn;
                    accepted = true;
                    break;
                }
            } catch (const DomainError&) {
                // retry with a shorter step
            }
            alpha *= 0.5;
        }
        if (!accepted)
            throw ConvergenceError("find_rep: Newton stalled at residual " +
                                   std::to_string(fn));
    }

    cand.z_e = z;
    cand.times = times;
    for (double t : times) {
        const Vec state = full_state(t, z);
        Vec xit(d, 0.0);
        if (d > 0)
            xit = lstsq(fundamental_matrix(action, state),
                        spatial(hamiltonian_field(h, state)));
        // Certification residual ||X_h - xi(t)_M|| at (t, z).
        Vec resid = spatial(hamiltonian_field(h, state));
        if (d > 0) {
            const Mat a = fundamental_matrix(action, state);
            const Vec axi = a * xit;
            for (std::size_t k = 0; k < resid.size(); ++k) resid[k] -= axi[k];
        }
        cand.xi.push_back(xit);
        cand.residuals.push_back(norm(resid));
    }
    cand.certified = cand.max_residual() <= tol;
    return cand;
}

double rep_residual(const ScalarField& h, const SymmetryAction& action,
                    const Vec& z, const std::function<Vec(double)>& xi_of_t,
                    const std::vector<double>& times) {
    double worst = 0.0;
    for (double t : times) {
        const Vec state = full_state(t, z);
        Vec resid = spatial(hamiltonian_field(h, state));
        const Vec xi = xi_of_t(t);
        for (std::size_t i = 0; i < action.dim(); ++i) {
            const Vec gi = spatial(action.fundamental_field(i, state));
            for (std::size_t k = 0; k < resid.size(); ++k)
                resid[k] -= xi[i] * gi[k];
        }
        worst = std::max(worst, norm(resid));
    }
    return worst;
}

SecondVariation second_variation(const ScalarField& h,
                                 const SymmetryAction& action,
                                 const REPCandidate& candidate, double t) {
    const Vec state = full_state(t, candidate.z_e);
    const Vec xi = candidate.xi_at(t);
    Mat hess = h.spatial_hessian(state);
    for (std::size_t i = 0; i < action.dim(); ++i) {
        const Mat hj = action.J[i].spatial_hessian(state);
        for (std::size_t a = 0; a < hess.rows(); ++a)
            for (std::size_t b = 0; b < hess.cols(); ++b)
                hess(a, b) -= xi[i] * hj(a, b);
    }
    // Symmetrize away roundoff; jet Hessians are symmetric by construction.
    for (std::size_t a = 0; a < hess.rows(); ++a)
        for (std::size_t b = a + 1; b < hess.cols(); ++b) {
            const double m = 0.5 * (hess(a, b) + hess(b, a));
            hess(a, b) = m;
            hess(b, a) = m;
        }
    return SecondVariation{t, hess};
}

GaugeKernelReport gauge_kernel_check(const ScalarField& h,
                                     const SymmetryAction& action,
                                     const REPCandidate& candidate,
                                     const Vec& mu, double t, double tol) {
    GaugeKernelReport r;
    const Vec state = full_state(t, candidate.z_e);
    if (max_abs_diff(action.momentum(state), mu) > 1e-8)
        throw Error("gauge_kernel_check: candidate is not on the mu level set");

    const Mat dj = action.momentum_jacobian(state);
    {
        Svd dec = svd(dj.transposed());
        std::size_t rank = 0;
        const double smax = dec.s.empty() ? 0.0 : dec.s[0];
        for (double s : dec.s)
            if (s > 1e-10 * std::max(1.0, smax)) ++rank;
        r.regular = rank == action.dim();
    }
    if (!r.regular) return r;
    if (action.dim() == 0) { // vacuous
        r.pass = true;
        return r;
    }

    const SecondVariation sv = second_variation(h, action, candidate, t);

    // Spatial basis of ker DJ inside ker eta.
    const std::size_t sd = candidate.z_e.size();
    Mat dj_spatial(action.dim(), sd);
    for (std::size_t i = 0; i < action.dim(); ++i)
        for (std::size_t k = 0; k < sd; ++k)
            dj_spatial(i, k) = dj(i, k + 1);
    const std::vector<Vec> kernel = nullspace(dj_spatial);

    for (std::size_t i = 0; i < action.dim(); ++i) {
        Vec zeta(sd);
        const FieldValue f = action.fundamental_field(i, state);
        for (std::size_t k = 0; k < sd; ++k) zeta[k] = f.components[k + 1];
        const Vec hz = sv.matrix * zeta;
        for (const Vec& v : kernel) {
            r.max_pairing = std::max(r.max_pairing, std::abs(dot(hz, v)));
            ++r.pairs;
        }
    }
    r.pass = r.max_pairing <= tol;
    return r;
}

} // namespace cosym
