#include "cosym/field.hpp"

#include <cmath>

namespace cosym {

namespace {

std::vector<Jet> seed_state(const Vec& state) {
    const std::size_t m = state.size();
    std::vector<Jet> coords;
    coords.reserve(m);
    for (std::size_t i = 0; i < m; ++i)
        coords.push_back(Jet::variable(state[i], i, m));
    return coords;
}

} // namespace

Jet2 ScalarField::eval(const Vec& state) const {
    chart_.check_point(state.size());
    Jet out = fn_(seed_state(state));
    if (!out.finite())
        throw DomainError("field '" + name_ + "' evaluated non-finite", state);
    return Jet2::from(out);
}

double ScalarField::value(const Vec& state) const {
    chart_.check_point(state.size());
    std::vector<Jet> coords;
    coords.reserve(state.size());
    for (double x : state) coords.emplace_back(x, 0);
    const Jet out = fn_(coords);
    if (!std::isfinite(out.value()))
        throw DomainError("field '" + name_ + "' evaluated non-finite", state);
    return out.value();
}

Jet ScalarField::eval_jets(const std::vector<Jet>& coords) const {
    chart_.check_point(coords.size());
    return fn_(coords);
}

double ScalarField::time_derivative(const Vec& state) const {
    return eval(state).gradient[0];
}

Vec ScalarField::spatial_gradient(const Vec& state) const {
    const Jet2 j = eval(state);
    return Vec(j.gradient.begin() + 1, j.gradient.end());
}

Mat ScalarField::spatial_hessian(const Vec& state) const {
    const Jet2 j = eval(state);
    const std::size_t d = state.size();
    Mat h(d - 1, d - 1);
    for (std::size_t i = 1; i < d; ++i)
        for (std::size_t k = 1; k < d; ++k) h(i - 1, k - 1) = j.hess(i, k);
    return h;
}

ScalarField fd_field(DarbouxChart chart, std::string name,
                     std::function<double(const Vec&)> f) {
    auto fn = [f = std::move(f)](const std::vector<Jet>& coords) -> Jet {
        const std::size_t d = coords.size();
        Vec x(d);
        for (std::size_t i = 0; i < d; ++i) x[i] = coords[i].value();
        const std::size_t m = coords[0].dim();
        const double f0 = f(x);
        if (m == 0) return Jet(f0, 0);

        // Central differences in the chart coordinates, then re-express in
        // the seed variables via the chain rule carried by the input jets.
        const double base = std::cbrt(2.2204460492503131e-16);
        Vec h(d);
        for (std::size_t i = 0; i < d; ++i)
            h[i] = base * std::max(1.0, std::abs(x[i]));

        Vec grad(d);
        Mat hess(d, d);
        for (std::size_t i = 0; i < d; ++i) {
            Vec xp = x, xm = x;
            xp[i] += h[i];
            xm[i] -= h[i];
            const double fp = f(xp), fm = f(xm);
            grad[i] = (fp - fm) / (2.0 * h[i]);
            hess(i, i) = (fp - 2.0 * f0 + fm) / (h[i] * h[i]);
        }
        for (std::size_t i = 0; i < d; ++i) {
            for (std::size_t j = i + 1; j < d; ++j) {
                Vec xpp = x, xpm = x, xmp = x, xmm = x;
                xpp[i] += h[i]; xpp[j] += h[j];
                xpm[i] += h[i]; xpm[j] -= h[j];
                xmp[i] -= h[i]; xmp[j] += h[j];
                xmm[i] -= h[i]; xmm[j] -= h[j];
                const double v =
                    (f(xpp) - f(xpm) - f(xmp) + f(xmm)) / (4.0 * h[i] * h[j]);
                hess(i, j) = v;
                hess(j, i) = v;
            }
        }
        // Chain rule: out = f0 + grad . dx + 1/2 dx^T hess dx, with dx the
        // input jets minus their values.
        Jet out(f0, m);
        std::vector<Jet> dx;
        dx.reserve(d);
        for (std::size_t i = 0; i < d; ++i)
            dx.push_back(coords[i] - coords[i].value());
        for (std::size_t i = 0; i < d; ++i) out += grad[i] * dx[i];
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j)
                out += 0.5 * hess(i, j) * (dx[i] * dx[j]);
        return out;
    };
    return ScalarField(chart, std::move(name), std::move(fn));
}

ScalarField linear_combination(const std::vector<double>& coeffs,
                               const std::vector<ScalarField>& fields,
                               std::string name) {
    if (coeffs.size() != fields.size() || fields.empty())
        throw DimensionError("linear_combination: size mismatch");
    DarbouxChart chart = fields[0].chart();
    auto fn = [coeffs, fields](const std::vector<Jet>& coords) -> Jet {
        Jet out = fields[0].eval_jets(coords) * coeffs[0];
        for (std::size_t i = 1; i < fields.size(); ++i)
            out += fields[i].eval_jets(coords) * coeffs[i];
        return out;
    };
    return ScalarField(chart, std::move(name), std::move(fn));
}

FieldValue reeb(const DarbouxChart& chart, const Vec& state) {
    chart.check_point(state.size());
    Vec c(chart.dim(), 0.0);
    c[0] = 1.0;
    return FieldValue{c};
}

FieldValue hamiltonian_field(const ScalarField& f, const Vec& state) {
    const DarbouxChart& chart = f.chart();
    const Jet2 j = f.eval(state);
    const std::size_t n = chart.n;
    Vec c(chart.dim(), 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        c[chart.q_index(i)] = j.gradient[chart.p_index(i)];
        c[chart.p_index(i)] = -j.gradient[chart.q_index(i)];
    }
    for (double v : c)
        if (!std::isfinite(v))
            throw DomainError("Hamiltonian field of '" + f.name() +
                                  "' non-finite",
                              state);
    return FieldValue{c};
}

FieldValue gradient_field(const ScalarField& f, const Vec& state) {
    FieldValue x = hamiltonian_field(f, state);
    const double rf = f.eval(state).gradient[0];
    x.components[0] = rf; // X_f + (Rf) R; R only has a t-component
    return x;
}

FieldValue evolution_field(const ScalarField& f, const Vec& state) {
    FieldValue x = hamiltonian_field(f, state);
    x.components[0] = 1.0;
    return x;
}

double poisson_bracket(const ScalarField& f, const ScalarField& g,
                       const Vec& state) {
    if (!(f.chart() == g.chart()))
        throw DimensionError("poisson_bracket: fields on different charts");
    const DarbouxChart& chart = f.chart();
    const Jet2 jf = f.eval(state);
    const Jet2 jg = g.eval(state);
    double s = 0.0;
    for (std::size_t i = 0; i < chart.n; ++i) {
        const std::size_t qi = chart.q_index(i), pi = chart.p_index(i);
        s += jf.gradient[qi] * jg.gradient[pi] -
             jf.gradient[pi] * jg.gradient[qi];
    }
    if (!std::isfinite(s))
        throw DomainError("poisson_bracket evaluated non-finite", state);
    return s;
}

FieldValue bivector_apply(const DarbouxChart& chart, const Vec& covector,
                          const Vec& state) {
    chart.check_point(covector.size());
    chart.check_point(state.size());
    Vec c(chart.dim(), 0.0);
    for (std::size_t i = 0; i < chart.n; ++i) {
        c[chart.q_index(i)] = covector[chart.p_index(i)];
        c[chart.p_index(i)] = -covector[chart.q_index(i)];
    }
    return FieldValue{c};
}

Mat omega_matrix(const DarbouxChart& chart) {
    Mat w(chart.dim(), chart.dim());
    for (std::size_t i = 0; i < chart.n; ++i) {
        w(chart.q_index(i), chart.p_index(i)) = 1.0;
        w(chart.p_index(i), chart.q_index(i)) = -1.0;
    }
    return w;
}

double directional_derivative(const ScalarField& f, const FieldValue& v,
                              const Vec& state) {
    const Jet2 j = f.eval(state);
    return dot(j.gradient, v.components);
}

FieldValue fd_lie_bracket(const std::function<FieldValue(const Vec&)>& x,
                          const std::function<FieldValue(const Vec&)>& y,
                          const Vec& state, double h) {
    const std::size_t d = state.size();
    const Vec xv = x(state).components;
    const Vec yv = y(state).components;
    Vec out(d, 0.0);
    // [X, Y]^k = sum_j (dY^k/dx^j X^j - dX^k/dx^j Y^j)
    for (std::size_t j = 0; j < d; ++j) {
        Vec sp = state, sm = state;
        sp[j] += h;
        sm[j] -= h;
        const Vec yp = y(sp).components, ym = y(sm).components;
        const Vec xp = x(sp).components, xm = x(sm).components;
        for (std::size_t k = 0; k < d; ++k) {
            const double dy = (yp[k] - ym[k]) / (2.0 * h);
            const double dx = (xp[k] - xm[k]) / (2.0 * h);
            out[k] += dy * xv[j] - dx * yv[j];
        }
    }
    return FieldValue{out};
}

SymplectizationReport symplectization_check(const ScalarField& f,
                                            const ScalarField& g,
                                            const std::vector<Vec>& sample_points,
                                            double tol) {
    const DarbouxChart& chart = f.chart();
    const std::size_t d = chart.dim();
    const std::size_t dd = d + 1; // coordinates (s, t, q, p)

    // Matrix of pr*omega + ds ^ pr*eta: spatial omega block plus the
    // (s, t) pairing.
    Mat w(dd, dd);
    for (std::size_t i = 0; i < chart.n; ++i) {
        w(1 + chart.q_index(i), 1 + chart.p_index(i)) = 1.0;
        w(1 + chart.p_index(i), 1 + chart.q_index(i)) = -1.0;
    }
    w(0, 1) = 1.0;  // ds ^ dt
    w(1, 0) = -1.0;

    SymplectizationReport report;
    report.samples = sample_points.size();
    report.min_abs_det = std::abs(lu_det(w));

    const Mat wt = w.transposed();
    for (const Vec& sp : sample_points) {
        if (sp.size() != dd)
            throw DimensionError("symplectization sample needs dimension " +
                                 std::to_string(dd));
        const Vec state(sp.begin() + 1, sp.end());
        const Jet2 jf = f.eval(state);
        const Jet2 jg = g.eval(state);
        // Pullback differentials: no ds component.
        Vec df(dd, 0.0), dg(dd, 0.0);
        for (std::size_t i = 0; i < d; ++i) {
            df[1 + i] = jf.gradient[i];
            dg[1 + i] = jg.gradient[i];
        }
        // iota_X w = dF  <=>  W^T X = dF
        const Vec xf = lu_solve(wt, df);
        const Vec xg = lu_solve(wt, dg);
        double bracket = 0.0; // omega_hat(X_F, X_G)
        for (std::size_t i = 0; i < dd; ++i)
            for (std::size_t j = 0; j < dd; ++j)
                bracket += xf[i] * w(i, j) * xg[j];
        const double cosym = poisson_bracket(f, g, state);
        report.max_bracket_residual =
            std::max(report.max_bracket_residual, std::abs(bracket - cosym));
    }
    report.pass = report.max_bracket_residual <= tol && report.min_abs_det > 0.0;
    return report;
}

} // namespace cosym
