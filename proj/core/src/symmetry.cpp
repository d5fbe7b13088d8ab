#include "cosym/symmetry.hpp"

#include <algorithm>
#include <cmath>

namespace cosym {

LieAlgebraSpec LieAlgebraSpec::so3() {
    LieAlgebraSpec g(3);
    // [xi_i, xi_j] = epsilon_ijk xi_k
    g.set_structure(2, 0, 1, 1.0);
    g.set_structure(2, 1, 0, -1.0);
    g.set_structure(0, 1, 2, 1.0);
    g.set_structure(0, 2, 1, -1.0);
    g.set_structure(1, 2, 0, 1.0);
    g.set_structure(1, 0, 2, -1.0);
    return g;
}

Vec LieAlgebraSpec::bracket(const Vec& a, const Vec& b) const {
    Vec out(dim, 0.0);
    for (std::size_t k = 0; k < dim; ++k)
        for (std::size_t i = 0; i < dim; ++i)
            for (std::size_t j = 0; j < dim; ++j)
                out[k] += structure(k, i, j) * a[i] * b[j];
    return out;
}

double LieAlgebraSpec::consistency_residual() const {
    double worst = 0.0;
    for (std::size_t k = 0; k < dim; ++k)
        for (std::size_t i = 0; i < dim; ++i)
            for (std::size_t j = 0; j < dim; ++j)
                worst = std::max(worst, std::abs(structure(k, i, j) +
                                                 structure(k, j, i)));
    // Jacobi: sum over cyclic permutations of [[xi_i, xi_j], xi_l] = 0.
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = 0; j < dim; ++j)
            for (std::size_t l = 0; l < dim; ++l)
                for (std::size_t m = 0; m < dim; ++m) {
                    double s = 0.0;
                    for (std::size_t k = 0; k < dim; ++k)
                        s += structure(k, i, j) * structure(m, k, l) +
                             structure(k, j, l) * structure(m, k, i) +
                             structure(k, l, i) * structure(m, k, j);
                    worst = std::max(worst, std::abs(s));
                }
    return worst;
}

void LieAlgebraSpec::validate(double tol) const {
    if (consistency_residual() > tol)
        throw Error("Lie algebra structure constants violate antisymmetry or "
                    "the Jacobi identity");
}

Vec SymmetryAction::momentum(const Vec& state) const {
    Vec mu(dim());
    for (std::size_t i = 0; i < dim(); ++i) mu[i] = J[i].value(state);
    return mu;
}

FieldValue SymmetryAction::fundamental_field(std::size_t i,
                                             const Vec& state) const {
    return hamiltonian_field(J[i], state);
}

FieldValue SymmetryAction::fundamental_field(const Vec& coeffs,
                                             const Vec& state) const {
    FieldValue out{Vec(chart().dim(), 0.0)};
    for (std::size_t i = 0; i < dim(); ++i) {
        const FieldValue fi = fundamental_field(i, state);
        for (std::size_t k = 0; k < out.components.size(); ++k)
            out.components[k] += coeffs[i] * fi.components[k];
    }
    return out;
}

Mat SymmetryAction::momentum_jacobian(const Vec& state) const {
    Mat dj(dim(), chart().dim());
    for (std::size_t i = 0; i < dim(); ++i) {
        const Jet2 ji = J[i].eval(state);
        for (std::size_t k = 0; k < chart().dim(); ++k)
            dj(i, k) = ji.gradient[k];
    }
    return dj;
}

MomentumMapReport verify_momentum_map(const SymmetryAction& action,
                                      const ScalarField& h,
                                      const std::vector<Vec>& sample_points,
                                      double tol) {
    MomentumMapReport r;
    r.samples = sample_points.size();
    const Mat w = omega_matrix(action.chart());
    const Mat wt = w.transposed();
    for (const Vec& x : sample_points) {
        const Jet2 jh = h.eval(x);
        for (std::size_t i = 0; i < action.dim(); ++i) {
            const Jet2 ji = action.J[i].eval(x);
            const FieldValue xi = action.fundamental_field(i, x);
            // (a) iota_{xi_M} omega - dJ restricted to ker eta
            const Vec contraction = wt * xi.components; // (iota_v omega)_k
            for (std::size_t k = 1; k < x.size(); ++k)
                r.max_form_residual = std::max(
                    r.max_form_residual,
                    std::abs(contraction[k] - ji.gradient[k]));
            // (b) R J_i
            r.max_reeb_residual =
                std::max(r.max_reeb_residual, std::abs(ji.gradient[0]));
            // (c) iota_{xi_M} eta
            r.max_eta_residual =
                std::max(r.max_eta_residual, std::abs(xi.t_component()));
            // (d) xi_M h
            r.max_invariance_residual =
                std::max(r.max_invariance_residual,
                         std::abs(dot(jh.gradient, xi.components)));
        }
    }
    r.pass = r.max_form_residual <= tol && r.max_reeb_residual <= tol &&
             r.max_eta_residual <= tol && r.max_invariance_residual <= tol;
    return r;
}

DriftReport conservation_along_flow(const SymmetryAction& action,
                                    const Trajectory& traj) {
    DriftReport r;
    r.max_drift.assign(action.dim(), 0.0);
    if (traj.states.empty()) return r;
    const Vec mu0 = action.momentum(traj.states.front());
    for (const Vec& x : traj.states) {
        const Vec mu = action.momentum(x);
        for (std::size_t i = 0; i < action.dim(); ++i)
            r.max_drift[i] =
                std::max(r.max_drift[i], std::abs(mu[i] - mu0[i]));
    }
    for (double d : r.max_drift) r.worst = std::max(r.worst, d);
    return r;
}

CocycleReport cocycle_form(const SymmetryAction& action,
                           const std::vector<Vec>& sample_points, double tol) {
    const std::size_t d = action.dim();
    CocycleReport r;
    r.sigma = Mat(d, d);
    std::vector<Mat> per_point;
    for (const Vec& x : sample_points) {
        Mat s(d, d);
        for (std::size_t i = 0; i < d; ++i) {
            for (std::size_t j = 0; j < d; ++j) {
                if (i == j) continue;
                double bracket = poisson_bracket(action.J[j], action.J[i], x);
                // J_{[xi_j, xi_i]} at the point
                double jb = 0.0;
                for (std::size_t k = 0; k < d; ++k)
                    jb += action.algebra.structure(k, j, i) *
                          action.J[k].value(x);
                s(i, j) = bracket - jb;
            }
        }
        per_point.push_back(s);
    }
    if (per_point.empty()) return r;
    for (const Mat& s : per_point)
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j)
                r.sigma(i, j) += s(i, j) / per_point.size();
    for (const Mat& s : per_point)
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j)
                r.max_deviation =
                    std::max(r.max_deviation, std::abs(s(i, j) - r.sigma(i, j)));
    r.constant = r.max_deviation <= tol;
    return r;
}

TangencyReport tangency_check(const SymmetryAction& action, const Vec& mu,
                              const Vec& state, double angle_tol) {
    TangencyReport r;
    const Vec jval = action.momentum(state);
    r.level_set_residual = max_abs_diff(jval, mu);

    const Mat dj = action.momentum_jacobian(state);
    {
        Svd d = svd(dj.transposed()); // singular values of DJ
        const double smax = d.s.empty() ? 0.0 : d.s[0];
        for (double s : d.s)
            if (s > 1e-10 * std::max(1.0, smax)) ++r.rank;
    }
    r.regular = r.rank == action.dim();

    const std::vector<Vec> ker_dj = nullspace(dj);
    r.level_dim = ker_dj.size();
    if (!r.regular) return r; // reported, not fatal

    // T(Gx) = span of the fundamental fields.
    std::vector<Vec> tangent_orbit;
    for (std::size_t i = 0; i < action.dim(); ++i)
        tangent_orbit.push_back(action.fundamental_field(i, state).components);
    const std::vector<Vec> orbit_q = orthonormal_span(tangent_orbit);

    // omega-orthogonal of a span: ker of B^T W.
    const Mat w = omega_matrix(action.chart());
    auto omega_orthogonal = [&](const std::vector<Vec>& basis) {
        if (basis.empty()) {
            Mat empty(0, action.chart().dim());
            return nullspace(empty);
        }
        const Mat b = Mat::from_columns(basis);
        return nullspace(b.transposed() * w);
    };

    // item 2: ker DJ = (T Gx)^{perp omega}
    const std::vector<Vec> perp_orbit = omega_orthogonal(orbit_q);
    const std::vector<Vec> ker_q = orthonormal_span(ker_dj);
    bool ok2 = subspaces_equal(ker_q, perp_orbit, angle_tol, &r.gap_item2);

    // item 3: (ker DJ)^{perp omega} = span{xi_M} + <R>
    const std::vector<Vec> perp_level = omega_orthogonal(ker_q);
    std::vector<Vec> orbit_plus_reeb = tangent_orbit;
    orbit_plus_reeb.push_back(reeb(action.chart(), state).components);
    bool ok3 = subspaces_equal(orthonormal_span(orbit_plus_reeb), perp_level,
                               angle_tol, &r.gap_item3);

    r.pass = ok2 && ok3;
    return r;
}

Vec ReductionChart::sigma_point(const Vec& u) const {
    std::vector<Jet> coords;
    for (double v : u) coords.emplace_back(v, 0);
    const std::vector<Jet> out = sigma(coords);
    Vec p(out.size());
    for (std::size_t i = 0; i < out.size(); ++i) p[i] = out[i].value();
    return p;
}

Vec ReductionChart::project_point(const Vec& u) const {
    std::vector<Jet> coords;
    for (double v : u) coords.emplace_back(v, 0);
    const std::vector<Jet> out = project(coords);
    Vec p(out.size());
    for (std::size_t i = 0; i < out.size(); ++i) p[i] = out[i].value();
    return p;
}

namespace {

Mat jet_jacobian(const std::function<std::vector<Jet>(const std::vector<Jet>&)>& f,
                 const Vec& u) {
    std::vector<Jet> coords;
    for (std::size_t i = 0; i < u.size(); ++i)
        coords.push_back(Jet::variable(u[i], i, u.size()));
    const std::vector<Jet> out = f(coords);
    Mat jac(out.size(), u.size());
    for (std::size_t i = 0; i < out.size(); ++i)
        for (std::size_t j = 0; j < u.size(); ++j) jac(i, j) = out[i].grad(j);
    return jac;
}

} // namespace

Mat ReductionChart::sigma_jacobian(const Vec& u) const {
    return jet_jacobian(sigma, u);
}

Mat ReductionChart::project_jacobian(const Vec& u) const {
    return jet_jacobian(project, u);
}

ReductionReport verify_reduction(const ReductionChart& chart,
                                 const SymmetryAction& action,
                                 const std::vector<Vec>& sample_us,
                                 double tol) {
    ReductionReport r;
    r.samples = sample_us.size();
    const Mat w = omega_matrix(action.chart());
    for (const Vec& u : sample_us) {
        if (chart.degenerate && chart.degenerate(u))
            throw DomainError("reduction chart degenerate at sample", u);
        const Vec ambient = chart.sigma_point(u);
        r.max_momentum_residual = std::max(
            r.max_momentum_residual,
            max_abs_diff(action.momentum(ambient), chart.mu));

        const Mat ds = chart.sigma_jacobian(u);
        const Mat pullback_omega = ds.transposed() * w * ds;

        const Vec red = chart.project_point(u);
        const Mat dp = chart.project_jacobian(u);
        const Mat omega_red = chart.omega_mu(red);
        const Mat pullback_red = dp.transposed() * omega_red * dp;
        for (std::size_t i = 0; i < chart.level_dim; ++i)
            for (std::size_t j = 0; j < chart.level_dim; ++j)
                r.max_omega_residual =
                    std::max(r.max_omega_residual,
                             std::abs(pullback_omega(i, j) - pullback_red(i, j)));

        // eta pullbacks: ambient eta = dt picks the t-row of the Jacobians.
        const Vec eta_red = chart.eta_mu(red);
        for (std::size_t j = 0; j < chart.level_dim; ++j) {
            double lhs = ds(0, j);
            double rhs = 0.0;
            for (std::size_t i = 0; i < chart.reduced_dim; ++i)
                rhs += eta_red[i] * dp(i, j);
            r.max_eta_residual =
                std::max(r.max_eta_residual, std::abs(lhs - rhs));
        }
    }
    r.pass = r.max_omega_residual <= tol && r.max_eta_residual <= tol &&
             r.max_momentum_residual <= tol;
    return r;
}

ScalarField reduced_hamiltonian(const ReductionChart& chart,
                                const ScalarField& h,
                                const std::vector<Vec>& check_us, double tol) {
    // Well-definedness: h must take equal values on distinct preimages.
    for (const Vec& u : check_us) {
        const double a = h.value(chart.sigma_point(u));
        const double b = h.value(chart.sigma_point(chart.fiber_shift(u, 0.7)));
        if (std::abs(a - b) > tol)
            throw Error("reduced_hamiltonian: '" + h.name() +
                        "' is not constant on fibers (gap " +
                        std::to_string(std::abs(a - b)) + ")");
    }
    if (chart.reduced_dim % 2 != 1)
        throw DimensionError("reduced coordinates must be odd-dimensional");
    DarbouxChart reduced{(chart.reduced_dim - 1) / 2, "reduced"};
    auto section = chart.section;
    auto sigma = chart.sigma;
    auto fn = [section, sigma, h](const std::vector<Jet>& red) -> Jet {
        return h.eval_jets(sigma(section(red)));
    };
    return ScalarField(reduced, "reduced(" + h.name() + ")", std::move(fn));
}

Vec reduced_evolution_field(const ReductionChart& chart, const ScalarField& k,
                            const Vec& reduced_state) {
    const std::size_t m = chart.reduced_dim;
    const Jet2 jk = k.eval(reduced_state);
    const Mat omega_red = chart.omega_mu(reduced_state);
    // Solve iota_v omega_mu = d_spatial k on the spatial block.
    Mat ws(m - 1, m - 1);
    for (std::size_t i = 1; i < m; ++i)
        for (std::size_t j = 1; j < m; ++j) ws(i - 1, j - 1) = omega_red(i, j);
    Vec rhs(m - 1);
    for (std::size_t i = 1; i < m; ++i) rhs[i - 1] = jk.gradient[i];
    const Vec v = lu_solve(ws.transposed(), rhs);
    Vec out(m, 0.0);
    out[0] = 1.0;
    for (std::size_t i = 1; i < m; ++i) out[i] = v[i - 1];
    return out;
}

} // namespace cosym
