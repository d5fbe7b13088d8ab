#include "cosym/threebody.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace cosym {

void ThreeBodyParams::validate() const {
    if (!(mu > 0.5 && mu < 1.0))
        throw Error("ThreeBodyParams: mu must lie in (1/2, 1)");
    if (std::abs(varpi) != 1.0)
        throw Error("ThreeBodyParams: varpi must be +1 or -1");
    if (collision_guard <= 0.0)
        throw Error("ThreeBodyParams: collision guard must be positive");
}

DarbouxChart three_body_chart() { return DarbouxChart{2, "three_body"}; }

namespace {

// Indices in the (t, r, phi, p_r, p_phi) chart.
constexpr std::size_t iT = 0, iR = 1, iPhi = 2, iPr = 3, iPphi = 4;

struct Distances {
    Jet d1sq, d2sq;
};

Distances primary_distances(const ThreeBodyParams& p,
                            const std::vector<Jet>& c) {
    const Jet& t = c[iT];
    const Jet& r = c[iR];
    const Jet& phi = c[iPhi];
    const Jet rel = phi - t * p.varpi;
    const Jet cr = cos(rel);
    const double r1 = p.r1(), r2 = p.r2();
    Distances d;
    d.d1sq = r * r + (2.0 * r1) * (r * cr) + r1 * r1;
    d.d2sq = r * r - (2.0 * r2) * (r * cr) + r2 * r2;
    return d;
}

} // namespace

ScalarField three_body_hamiltonian(const ThreeBodyParams& params) {
    params.validate();
    const ThreeBodyParams p = params;
    auto fn = [p](const std::vector<Jet>& c) -> Jet {
        const Distances d = primary_distances(p, c);
        const double guard2 = p.collision_guard * p.collision_guard;
        if (d.d1sq.value() <= guard2 || d.d2sq.value() <= guard2) {
            Vec point;
            for (const Jet& j : c) point.push_back(j.value());
            throw CollisionError("three-body evaluation at a primary", point);
        }
        const Jet& r = c[iR];
        const Jet& pr = c[iPr];
        const Jet& pphi = c[iPphi];
        return 0.5 * (pr * pr) + 0.5 * (pphi * pphi) / (r * r) -
               p.mu / sqrt(d.d1sq) - (1.0 - p.mu) / sqrt(d.d2sq);
    };
    return ScalarField(three_body_chart(), "h_three_body", fn);
}

ScalarField upsilon(const ThreeBodyParams& params) {
    const double varpi = params.varpi;
    auto fn = [varpi](const std::vector<Jet>& c) -> Jet {
        return c[iT] + varpi * c[iPphi];
    };
    return ScalarField(three_body_chart(), "upsilon", fn);
}

Vec ReducedThreeBody::project(const Vec& ambient_state) const {
    chart.check_point(ambient_state.size());
    Vec red = ambient_state;
    red[iPhi] = ambient_state[iPhi] - params.varpi * ambient_state[iT];
    return red;
}

Mat ReducedThreeBody::projection_jacobian(const Vec&) const {
    Mat dpi(4, 5);
    dpi(0, iR) = 1.0;
    dpi(1, iT) = -params.varpi;
    dpi(1, iPhi) = 1.0;
    dpi(2, iPr) = 1.0;
    dpi(3, iPphi) = 1.0;
    return dpi;
}

ReducedThreeBody reduce(const ThreeBodyParams& params) {
    params.validate();
    ReducedThreeBody red;
    red.params = params;
    red.chart = DarbouxChart{2, "three_body_rotating"};
    const ThreeBodyParams p = params;
    auto fn = [p](const std::vector<Jet>& c) -> Jet {
        // coordinates (t, r, phi', p_r, p_phi); the potential uses phi'
        // directly, so freeze the rotation by zeroing the time coupling.
        const Jet& r = c[iR];
        const Jet& phi = c[iPhi];
        const Jet& pr = c[iPr];
        const Jet& pphi = c[iPphi];
        const Jet cr = cos(phi);
        const double r1 = p.r1(), r2 = p.r2();
        const Jet d1sq = r * r + (2.0 * r1) * (r * cr) + r1 * r1;
        const Jet d2sq = r * r - (2.0 * r2) * (r * cr) + r2 * r2;
        const double guard2 = p.collision_guard * p.collision_guard;
        if (d1sq.value() <= guard2 || d2sq.value() <= guard2) {
            Vec point;
            for (const Jet& j : c) point.push_back(j.value());
            throw CollisionError("reduced three-body evaluation at a primary",
                                 point);
        }
        return (-p.varpi) * pphi + 0.5 * (pr * pr) +
               0.5 * (pphi * pphi) / (r * r) - p.mu / sqrt(d1sq) -
               (1.0 - p.mu) / sqrt(d2sq);
    };
    red.k = ScalarField(red.chart, "k_rotating", fn);
    return red;
}

ReductionIdentityReport verify_reduction_identities(
    const ReducedThreeBody& reduced, const std::vector<Vec>& ambient_samples,
    double tol) {
    ReductionIdentityReport rep;
    const ScalarField h = three_body_hamiltonian(reduced.params);
    const ScalarField y = upsilon(reduced.params);
    // c = R Upsilon is the constant 1 for this symmetry.
    const double c = 1.0;

    // (grad Y)(h - Y/c); position-independence is asserted below, so the
    // antiderivative can be accumulated from any reference spatial point.
    auto source = [&](const Vec& state) {
        const FieldValue gy = gradient_field(y, state);
        return directional_derivative(h, gy, state) -
               directional_derivative(y, gy, state) / c;
    };

    if (ambient_samples.empty()) return rep;
    const Vec ref = ambient_samples.front();
    for (const Vec& x : ambient_samples) {
        Vec shifted = ref;
        shifted[0] = x[0];
        rep.max_source_position_dependence =
            std::max(rep.max_source_position_dependence,
                     std::abs(source(x) - source(shifted)));
    }

    // Antiderivative G(t) = int_0^t source dt' by adaptive Simpson at the
    // reference spatial point.
    auto source_at_time = [&](double t) {
        Vec x = ref;
        x[0] = t;
        return source(x);
    };
    std::function<double(double, double, double, double, double, int)> simpson =
        [&](double a, double b, double fa, double fb, double fm,
            int depth) -> double {
        const double m = 0.5 * (a + b);
        const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
        const double flm = source_at_time(lm), frm = source_at_time(rm);
        const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
        const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        if (depth <= 0 || std::abs(left + right - whole) < 1e-13)
            return left + right;
        return simpson(a, m, fa, fm, flm, depth - 1) +
               simpson(m, b, fm, fb, frm, depth - 1);
    };
    auto antiderivative = [&](double t) {
        if (t == 0.0) return 0.0;
        const double fa = source_at_time(0.0), fb = source_at_time(t);
        const double fm = source_at_time(0.5 * t);
        return simpson(0.0, t, fa, fb, fm, 30);
    };

    for (const Vec& x : ambient_samples) {
        const Vec red_state = reduced.project(x);
        const double lhs = reduced.k.value(red_state);
        const double rhs = h.value(x) - y.value(x) / c - antiderivative(x[0]);
        rep.max_k_formula_residual =
            std::max(rep.max_k_formula_residual, std::abs(lhs - rhs));

        // Pushforward of the evolution field vs the reduced Hamiltonian field.
        const FieldValue eh = evolution_field(h, x);
        const Mat dpi = reduced.projection_jacobian(x);
        const Vec pushed = dpi * eh.components;
        const FieldValue xk = hamiltonian_field(reduced.k, red_state);
        for (std::size_t i = 0; i < 4; ++i)
            rep.max_pushforward_residual =
                std::max(rep.max_pushforward_residual,
                         std::abs(pushed[i] - xk.components[i + 1]));

        rep.max_time_dependence = std::max(
            rep.max_time_dependence,
            std::abs(reduced.k.time_derivative(red_state)));
    }
    rep.pass = rep.max_k_formula_residual <= tol &&
               rep.max_pushforward_residual <= tol &&
               rep.max_time_dependence <= tol;
    return rep;
}

std::string to_string(LagrangeLabel label) {
    switch (label) {
    case LagrangeLabel::L1: return "L1";
    case LagrangeLabel::L2: return "L2";
    case LagrangeLabel::L3: return "L3";
    case LagrangeLabel::L4: return "L4";
    case LagrangeLabel::L5: return "L5";
    }
    return "?";
}

Vec LagrangePoint::embed(const ThreeBodyParams& params, double t) const {
    double offset = 0.0;
    switch (angle_mode) {
    case AngleMode::k0: offset = 0.0; break;
    case AngleMode::k1: offset = M_PI; break;
    case AngleMode::triangular: offset = delta_or_k; break;
    }
    return Vec{t, r, params.varpi * t + offset, 0.0, params.varpi * r * r};
}

std::array<double, 6> quintic_coefficients(const ThreeBodyParams& params,
                                           int sign) {
    params.validate();
    return quintic_coefficients_mu(params.mu, sign);
}

std::array<double, 6> quintic_coefficients_mu(double mu, int sign) {
    const double s = sign >= 0 ? 1.0 : -1.0;
    return {
        1.0,
        2.0 - 4.0 * mu,
        6.0 * mu * mu - 6.0 * mu + 1.0,
        -4.0 * mu * mu * mu + 6.0 * mu * mu - (3.0 + s) * mu + s,
        mu * mu * mu * mu - 2.0 * mu * mu * mu + (3.0 + 2.0 * s) * mu * mu -
            s * (4.0 * mu - 2.0),
        -mu * mu * mu + s * (1.0 - mu) * (1.0 - mu) * (1.0 - mu),
    };
}

std::array<double, 6> l3_polynomial(const ThreeBodyParams& params) {
    params.validate();
    const double d = 1.0 - params.mu;
    const double d2 = d * d, d3 = d2 * d, d4 = d3 * d;
    // (1 - r) S(r) + delta Q(r, delta) with S = -(1+r)^2 (1+r+r^2),
    // collected in descending powers of r.
    return {
        1.0,
        2.0 - 4.0 * d,
        1.0 - 6.0 * d + 6.0 * d2,
        -1.0 - 2.0 * d + 6.0 * d2 - 4.0 * d3,
        -2.0 + 4.0 * d + d2 - 2.0 * d3 + d4,
        -1.0 + 3.0 * d - 3.0 * d2,
    };
}

double polynomial_eval(const std::array<double, 6>& coeffs, double r) {
    double v = 0.0;
    for (double c : coeffs) v = v * r + c;
    return v;
}

namespace {

double polynomial_deriv(const std::array<double, 6>& coeffs, double r) {
    double v = 0.0;
    const int n = static_cast<int>(coeffs.size()) - 1;
    for (int i = 0; i < n; ++i) v = v * r + coeffs[i] * (n - i);
    return v;
}

} // namespace

std::vector<double> polynomial_roots(const std::array<double, 6>& coeffs,
                                     double lo, double hi) {
    std::vector<double> roots;
    const double step = 1e-3;
    double a = lo;
    double fa = polynomial_eval(coeffs, a);
    while (a < hi) {
        const double b = std::min(a + step, hi);
        const double fb = polynomial_eval(coeffs, b);
        if (fa == 0.0) roots.push_back(a);
        if (fa * fb < 0.0) {
            double x0 = a, x1 = b, f0 = fa;
            while (x1 - x0 > 1e-13) {
                const double m = 0.5 * (x0 + x1);
                const double fm = polynomial_eval(coeffs, m);
                if (f0 * fm <= 0.0) {
                    x1 = m;
                } else {
                    x0 = m;
                    f0 = fm;
                }
            }
            double root = 0.5 * (x0 + x1);
            for (int it = 0; it < 4; ++it) {
                const double f = polynomial_eval(coeffs, root);
                const double df = polynomial_deriv(coeffs, root);
                if (df == 0.0) break;
                const double next = root - f / df;
                if (next < lo || next > hi) break;
                root = next;
            }
            roots.push_back(root);
        }
        a = b;
        fa = fb;
    }
    return roots;
}

std::vector<LagrangePoint> solve_collinear(const ThreeBodyParams& params) {
    params.validate();
    const double delta = 1.0 - params.mu;
    const double hill = std::cbrt(delta / 3.0);
    const double approx_l1 = 1.0 - hill;
    const double approx_l2 = 1.0 + hill;
    const double approx_l3 = 1.0 + 5.0 * delta / 12.0;

    const auto p_plus = quintic_coefficients(params, +1);
    const auto p_minus = quintic_coefficients(params, -1);
    std::vector<std::pair<double, const std::array<double, 6>*>> candidates;
    for (double r : polynomial_roots(p_plus, 1e-3, 3.0))
        candidates.push_back({r, &p_plus});
    for (double r : polynomial_roots(p_minus, 1e-3, 3.0))
        candidates.push_back({r, &p_minus});
    if (candidates.empty())
        throw ConvergenceError(
            "solve_collinear: no quintic bracket found scanning [1e-3, 3] at "
            "step 1e-3 (" +
            std::to_string(static_cast<int>((3.0 - 1e-3) / 1e-3)) +
            " intervals)");

    auto nearest = [&](double target) {
        std::size_t best = 0;
        for (std::size_t i = 1; i < candidates.size(); ++i)
            if (std::abs(candidates[i].first - target) <
                std::abs(candidates[best].first - target))
                best = i;
        return candidates[best];
    };

    std::vector<LagrangePoint> out;
    {
        const auto [r, poly] = nearest(approx_l1);
        LagrangePoint lp;
        lp.label = LagrangeLabel::L1;
        lp.r = r;
        lp.angle_mode = AngleMode::k0;
        lp.delta_or_k = 0.0;
        lp.p_phi = params.varpi * r * r;
        lp.residual_quintic = std::abs(polynomial_eval(*poly, r));
        out.push_back(lp);
    }
    {
        const auto [r, poly] = nearest(approx_l2);
        LagrangePoint lp;
        lp.label = LagrangeLabel::L2;
        lp.r = r;
        lp.angle_mode = AngleMode::k0;
        lp.delta_or_k = 0.0;
        lp.p_phi = params.varpi * r * r;
        lp.residual_quintic = std::abs(polynomial_eval(*poly, r));
        out.push_back(lp);
    }
    {
        const auto poly = l3_polynomial(params);
        const std::vector<double> roots = polynomial_roots(poly, 1e-3, 3.0);
        if (roots.empty())
            throw ConvergenceError(
                "solve_collinear: no L3 bracket found scanning [1e-3, 3]");
        double best = roots.front();
        for (double r : roots)
            if (std::abs(r - approx_l3) < std::abs(best - approx_l3)) best = r;
        LagrangePoint lp;
        lp.label = LagrangeLabel::L3;
        lp.r = best;
        lp.angle_mode = AngleMode::k1;
        lp.delta_or_k = 1.0;
        lp.p_phi = params.varpi * best * best;
        lp.residual_quintic = std::abs(polynomial_eval(poly, best));
        out.push_back(lp);
    }
    return out;
}

std::vector<LagrangePoint> solve_triangular(const ThreeBodyParams& params) {
    params.validate();
    const double mu = params.mu;
    const double r = std::sqrt(1.0 - mu * (1.0 - mu));
    const double delta = std::acos((mu - 0.5) / r);

    // Radial force-balance row at unit distances collapses to r = r.
    auto radial_residual = [&](double d) {
        const double cd = std::cos(d);
        const double r1 = params.r1(), r2 = params.r2();
        const double d1 = std::pow(r * r + r1 * r1 + 2 * r * r1 * cd, 1.5);
        const double d2 = std::pow(r * r + r2 * r2 - 2 * r * r2 * cd, 1.5);
        return std::abs(r - mu * (r + r1 * cd) / d1 -
                        (1 - mu) * (r - r2 * cd) / d2);
    };

    std::vector<LagrangePoint> out;
    for (int sign : {+1, -1}) {
        LagrangePoint lp;
        lp.label = sign > 0 ? LagrangeLabel::L4 : LagrangeLabel::L5;
        lp.r = r;
        lp.angle_mode = AngleMode::triangular;
        lp.delta_or_k = sign * delta;
        lp.p_phi = params.varpi * r * r;
        lp.residual_quintic = radial_residual(lp.delta_or_k);
        out.push_back(lp);
    }
    return out;
}

std::size_t l3_minus_branch_root_count(const ThreeBodyParams& params,
                                       double lo, double hi) {
    // r = -mu/(r-1+mu)^2 + (1-mu)/(mu+r)^2 cleared of denominators.
    const double mu = params.mu;
    auto f = [&](double r) {
        const double a = r - 1.0 + mu;
        const double b = mu + r;
        return r * a * a * b * b + mu * b * b - (1.0 - mu) * a * a;
    };
    std::size_t count = 0;
    const double step = 1e-3;
    double a = lo, fa = f(a);
    while (a < hi) {
        const double b = std::min(a + step, hi);
        const double fb = f(b);
        if (fa * fb < 0.0) ++count;
        a = b;
        fa = fb;
    }
    return count;
}

GradientRepResidual gradient_rep_residual(const ThreeBodyParams& params,
                                          const LagrangePoint& point,
                                          const std::vector<double>& times) {
    const ScalarField h = three_body_hamiltonian(params);
    const ScalarField y = upsilon(params);
    GradientRepResidual out;
    for (double t : times) {
        const Vec x = point.embed(params, t);
        const FieldValue eh = evolution_field(h, x);
        const FieldValue gy = gradient_field(y, x);
        out.field_residual =
            std::max(out.field_residual,
                     norm(sub(eh.components, gy.components)));
        const FieldValue gh = gradient_field(h, x);
        out.literal_residual =
            std::max(out.literal_residual,
                     norm(sub(gh.components, gy.components)));
    }
    return out;
}

HillL3Report hill_and_l3_approx(double mu) {
    if (!(mu > 0.5 && mu < 1.0))
        throw Error("hill_and_l3_approx: mu must lie in (1/2, 1)");
    HillL3Report rep;
    const double delta0 = 1.0 - mu;
    const double hill = std::cbrt(delta0 / 3.0);
    rep.hill_l1 = 1.0 - hill;
    rep.hill_l2 = 1.0 + hill;
    rep.l3 = 1.0 + 5.0 * delta0 / 12.0;

    rep.deltas = {1e-2, 1e-3, 1e-4};
    for (double d : rep.deltas) {
        ThreeBodyParams p;
        p.mu = 1.0 - d;
        const double h = std::cbrt(d / 3.0);
        const auto pts = solve_collinear(p);
        const double e1 = std::abs(pts[0].r - (1.0 - h));
        const double e2 = std::abs(pts[1].r - (1.0 + h));
        const double e3 = std::abs(pts[2].r - (1.0 + 5.0 * d / 12.0));
        rep.l1_error.push_back(e1);
        rep.l2_error.push_back(e2);
        rep.l3_error.push_back(e3);
        const double scale = std::pow(d, 2.0 / 3.0);
        rep.l1_ratio.push_back(e1 / scale);
        rep.l2_ratio.push_back(e2 / scale);
    }
    return rep;
}

std::string lagrange_csv(const std::vector<LagrangePoint>& points) {
    std::ostringstream os;
    os.precision(17);
    os << "label,r,delta_or_k,p_phi,residual_field,residual_quintic\n";
    for (const auto& p : points)
        os << to_string(p.label) << "," << p.r << "," << p.delta_or_k << ","
           << p.p_phi << "," << p.residual_field << "," << p.residual_quintic
           << "\n";
    return os.str();
}

} // namespace cosym
