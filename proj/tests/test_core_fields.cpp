#include "doctest.h"

#include <cmath>

#include "cosym/field.hpp"
#include "cosym/rng.hpp"

using namespace cosym;

namespace {

ScalarField harmonic_oscillator() {
    DarbouxChart chart{1, "harmonic"};
    return ScalarField(chart, "h_harmonic", [](const std::vector<Jet>& c) {
        return 0.5 * (sq(c[1]) + sq(c[2]));
    });
}

/// Random polynomial in (t, q, p) with degree <= 3 monomials.
struct PolyField {
    struct Term {
        double coeff;
        std::vector<int> exps;
    };
    std::vector<Term> terms;
    DarbouxChart chart;

    static PolyField random(Rng& rng, const DarbouxChart& chart,
                            std::size_t nterms = 6) {
        PolyField p;
        p.chart = chart;
        for (std::size_t k = 0; k < nterms; ++k) {
            Term t;
            t.coeff = rng.uniform(-1, 1);
            t.exps.resize(chart.dim());
            int total = 0;
            for (auto& e : t.exps) {
                e = static_cast<int>(rng.uniform(0, 2.4));
                total += e;
                if (total > 3) e = 0;
            }
            p.terms.push_back(t);
        }
        return p;
    }

    ScalarField field(const std::string& name) const {
        auto terms_copy = terms;
        return ScalarField(chart, name,
                           [terms_copy](const std::vector<Jet>& c) {
                               Jet out(0.0, c[0].dim());
                               for (const auto& t : terms_copy) {
                                   Jet m(t.coeff, c[0].dim());
                                   for (std::size_t i = 0; i < c.size(); ++i)
                                       if (t.exps[i] > 0)
                                           m = m * pow(c[i], t.exps[i]);
                                   out += m;
                               }
                               return out;
                           });
    }
};

Vec random_state(Rng& rng, const DarbouxChart& chart) {
    return rng.uniform_vec(chart.dim(), -1.5, 1.5);
}

} // namespace

TEST_CASE("reeb field is (1, 0, ..., 0) and satisfies its contractions") {
    DarbouxChart c1{1, "c1"};
    const FieldValue r1 = reeb(c1, Vec{0.3, 1.0, -2.0});
    CHECK(r1.components == Vec{1.0, 0.0, 0.0});

    DarbouxChart c2{2, "c2"};
    const FieldValue r2 = reeb(c2, Vec{3.2, 1, 1, 1, 1});
    CHECK(r2.components == Vec{1, 0, 0, 0, 0});

    // iota_R omega = 0 and iota_R eta = 1, exactly, at random points.
    Rng rng(kDefaultSeed);
    const Mat w = omega_matrix(c2);
    for (int i = 0; i < 10; ++i) {
        const Vec x = random_state(rng, c2);
        const FieldValue r = reeb(c2, x);
        const Vec contraction = w.transposed() * r.components;
        CHECK(norm(contraction) == 0.0);
        CHECK(r.t_component() == 1.0);
    }
}

TEST_CASE("hamiltonian field in Darboux coordinates") {
    DarbouxChart c1{1, "c1"};
    SUBCASE("free particle f = p1") {
        ScalarField f(c1, "p1",
                      [](const std::vector<Jet>& c) { return c[2]; });
        const FieldValue v = hamiltonian_field(f, Vec{0.7, 0.2, 0.9});
        CHECK(v.components == Vec{0.0, 1.0, 0.0});
    }
    SUBCASE("f = t gives the zero field") {
        ScalarField f(c1, "t", [](const std::vector<Jet>& c) { return c[0]; });
        const FieldValue v = hamiltonian_field(f, Vec{0.7, 0.2, 0.9});
        CHECK(v.norm() == 0.0);
    }
    SUBCASE("harmonic oscillator at (t, 1, 0)") {
        const FieldValue v =
            hamiltonian_field(harmonic_oscillator(), Vec{0.3, 1.0, 0.0});
        CHECK(v.components[0] == 0.0);
        CHECK(v.components[1] == doctest::Approx(0.0));
        CHECK(v.components[2] == doctest::Approx(-1.0));
    }
}

TEST_CASE("gradient field = X_f + (Rf) R") {
    DarbouxChart c1{1, "c1"};
    SUBCASE("grad t = R") {
        ScalarField f(c1, "t", [](const std::vector<Jet>& c) { return c[0]; });
        const FieldValue v = gradient_field(f, Vec{0.1, 0.2, 0.3});
        CHECK(v.components == Vec{1.0, 0.0, 0.0});
    }
    SUBCASE("time-independent f reduces to the Hamiltonian field") {
        Rng rng(11);
        DarbouxChart c2{2, "c2"};
        for (int i = 0; i < 5; ++i) {
            // polynomial in spatial coordinates only
            PolyField p = PolyField::random(rng, c2);
            for (auto& t : p.terms) t.exps[0] = 0;
            const ScalarField f = p.field("f");
            const Vec x = random_state(rng, c2);
            CHECK(max_abs_diff(gradient_field(f, x).components,
                               hamiltonian_field(f, x).components) == 0.0);
        }
    }
    SUBCASE("construction identity grad f - X_f - (Rf) R = 0 exactly") {
        Rng rng(12);
        DarbouxChart c2{2, "c2"};
        for (int i = 0; i < 10; ++i) {
            const ScalarField f = PolyField::random(rng, c2).field("f");
            const Vec x = random_state(rng, c2);
            const FieldValue g = gradient_field(f, x);
            const FieldValue xh = hamiltonian_field(f, x);
            const double rf = f.eval(x).gradient[0];
            Vec expect = xh.components;
            expect[0] += rf;
            CHECK(max_abs_diff(g.components, expect) == 0.0);
        }
    }
}

TEST_CASE("evolution field has unit time component") {
    DarbouxChart c1{1, "c1"};
    SUBCASE("f = 0 gives the Reeb field") {
        ScalarField zero(c1, "0", [](const std::vector<Jet>& c) {
            return Jet(0.0, c[0].dim());
        });
        const FieldValue v = evolution_field(zero, Vec{0.4, 1.0, 2.0});
        CHECK(v.components == Vec{1.0, 0.0, 0.0});
    }
    SUBCASE("harmonic oscillator at (t, 1, 0)") {
        const FieldValue v =
            evolution_field(harmonic_oscillator(), Vec{0.0, 1.0, 0.0});
        CHECK(v.components[0] == 1.0);
        CHECK(v.components[1] == doctest::Approx(0.0));
        CHECK(v.components[2] == doctest::Approx(-1.0));
    }
}

TEST_CASE("poisson bracket canonical pairs and antisymmetry") {
    DarbouxChart c2{2, "c2"};
    ScalarField q1(c2, "q1", [](const std::vector<Jet>& c) { return c[1]; });
    ScalarField p1(c2, "p1", [](const std::vector<Jet>& c) { return c[3]; });
    Rng rng(13);
    for (int i = 0; i < 10; ++i) {
        const Vec x = random_state(rng, c2);
        CHECK(poisson_bracket(q1, p1, x) == doctest::Approx(1.0));
    }
    for (int i = 0; i < 20; ++i) {
        const ScalarField f = PolyField::random(rng, c2).field("f");
        const Vec x = random_state(rng, c2);
        CHECK(std::abs(poisson_bracket(f, f, x)) < 1e-14);
    }
}

TEST_CASE("poisson bracket properties: antisymmetry, bilinearity, Leibniz") {
    Rng rng(kDefaultSeed);
    DarbouxChart c2{2, "c2"};
    for (int trial = 0; trial < 10; ++trial) {
        const ScalarField f = PolyField::random(rng, c2).field("f");
        const ScalarField g = PolyField::random(rng, c2).field("g");
        const ScalarField h = PolyField::random(rng, c2).field("h");
        const double a = rng.uniform(-2, 2), b = rng.uniform(-2, 2);
        const ScalarField af_bg = linear_combination({a, b}, {f, g}, "af+bg");
        const ScalarField fg(c2, "f*g", [f, g](const std::vector<Jet>& c) {
            return f.eval_jets(c) * g.eval_jets(c);
        });
        const Vec x = random_state(rng, c2);

        // antisymmetry
        CHECK(std::abs(poisson_bracket(f, g, x) + poisson_bracket(g, f, x)) <=
              1e-9);
        // bilinearity
        CHECK(std::abs(poisson_bracket(af_bg, h, x) -
                       (a * poisson_bracket(f, h, x) +
                        b * poisson_bracket(g, h, x))) <= 1e-9);
        // Leibniz {h, fg} = {h, f} g + f {h, g}
        CHECK(std::abs(poisson_bracket(h, fg, x) -
                       (poisson_bracket(h, f, x) * g.value(x) +
                        f.value(x) * poisson_bracket(h, g, x))) <= 1e-9);
    }
}

TEST_CASE("Jacobi identity through nested jet brackets") {
    // The bracket of two jet fields is itself jet-evaluable one order down;
    // degree-3 polynomials keep everything exact.
    Rng rng(17);
    DarbouxChart c1{1, "c1"};
    auto bracket = [&](const ScalarField& f, const ScalarField& g) {
        return ScalarField(c1, "bracket",
                           [f, g](const std::vector<Jet>& c) -> Jet {
                               // {f,g} = df/dq dg/dp - df/dp dg/dq, expressed
                               // with one extra seeding layer
                               const std::size_t m = c[0].dim();
                               // evaluate gradients by re-seeding at the
                               // numeric point; exact for the value and first
                               // derivative needs second derivatives of f, g
                               // which the jets carry.
                               Vec x(c.size());
                               for (std::size_t i = 0; i < c.size(); ++i)
                                   x[i] = c[i].value();
                               const Jet2 jf = f.eval(x);
                               const Jet2 jg = g.eval(x);
                               // value
                               double val = jf.gradient[1] * jg.gradient[2] -
                                            jf.gradient[2] * jg.gradient[1];
                               // d/dx_k of the bracket via second derivatives
                               Jet out(val, m);
                               std::vector<Jet> dx;
                               for (std::size_t i = 0; i < c.size(); ++i)
                                   dx.push_back(c[i] - x[i]);
                               for (std::size_t k = 0; k < c.size(); ++k) {
                                   const double dk =
                                       jf.hess(1, k) * jg.gradient[2] +
                                       jf.gradient[1] * jg.hess(2, k) -
                                       jf.hess(2, k) * jg.gradient[1] -
                                       jf.gradient[2] * jg.hess(1, k);
                                   out += dk * dx[k];
                               }
                               return out;
                           });
    };
    for (int trial = 0; trial < 10; ++trial) {
        const ScalarField f = PolyField::random(rng, c1, 4).field("f");
        const ScalarField g = PolyField::random(rng, c1, 4).field("g");
        const ScalarField h = PolyField::random(rng, c1, 4).field("h");
        const Vec x = rng.uniform_vec(3, -1, 1);
        const double jacobi = poisson_bracket(f, bracket(g, h), x) +
                              poisson_bracket(g, bracket(h, f), x) +
                              poisson_bracket(h, bracket(f, g), x);
        CHECK(std::abs(jacobi) <= 1e-9);
    }
}

TEST_CASE("bracket field equals minus the commutator of Hamiltonian fields") {
    Rng rng(19);
    DarbouxChart c2{2, "c2"};
    for (int trial = 0; trial < 8; ++trial) {
        const ScalarField f = PolyField::random(rng, c2).field("f");
        const ScalarField g = PolyField::random(rng, c2).field("g");
        const Vec x = random_state(rng, c2);

        // X_{{f,g}} via finite differences of the bracket scalar
        DarbouxChart chart = c2;
        ScalarField bracket_fd = fd_field(
            chart, "{f,g}", [&](const Vec& y) { return poisson_bracket(f, g, y); });
        const FieldValue lhs = hamiltonian_field(bracket_fd, x);

        const FieldValue commut = fd_lie_bracket(
            [&](const Vec& y) { return hamiltonian_field(f, y); },
            [&](const Vec& y) { return hamiltonian_field(g, y); }, x);
        Vec rhs = commut.components;
        for (auto& v : rhs) v = -v;
        CHECK(max_abs_diff(lhs.components, rhs) <= 1e-6);
    }
}

TEST_CASE("[R, X_f] vanishes for time-independent f") {
    Rng rng(23);
    DarbouxChart c2{2, "c2"};
    for (int trial = 0; trial < 5; ++trial) {
        PolyField p = PolyField::random(rng, c2);
        for (auto& t : p.terms) t.exps[0] = 0;
        const ScalarField f = p.field("f");
        const Vec x = random_state(rng, c2);
        const FieldValue br = fd_lie_bracket(
            [&](const Vec& y) { return reeb(c2, y); },
            [&](const Vec& y) { return hamiltonian_field(f, y); }, x);
        CHECK(br.norm() <= 1e-6);
    }
}

TEST_CASE("bivector sharp") {
    DarbouxChart c2{2, "c2"};
    const Vec x{0.1, 0.2, 0.3, 0.4, 0.5};
    SUBCASE("dt is in the kernel") {
        const FieldValue v = bivector_apply(c2, Vec{1, 0, 0, 0, 0}, x);
        CHECK(v.norm() == 0.0);
    }
    SUBCASE("dq1 maps to -d/dp1") {
        const FieldValue v = bivector_apply(c2, Vec{0, 1, 0, 0, 0}, x);
        CHECK(v.components == Vec{0, 0, 0, -1, 0});
    }
    SUBCASE("sharp of df is the Hamiltonian field") {
        Rng rng(29);
        for (int i = 0; i < 10; ++i) {
            const ScalarField f = PolyField::random(rng, c2).field("f");
            const Vec y = random_state(rng, c2);
            const Jet2 jf = f.eval(y);
            const FieldValue v = bivector_apply(c2, jf.gradient, y);
            CHECK(max_abs_diff(v.components,
                               hamiltonian_field(f, y).components) == 0.0);
        }
    }
}

TEST_CASE("symplectization bracket consistency") {
    DarbouxChart c2{2, "c2"};
    Rng rng(kDefaultSeed);
    SUBCASE("canonical pair") {
        ScalarField q1(c2, "q1",
                       [](const std::vector<Jet>& c) { return c[1]; });
        ScalarField p1(c2, "p1",
                       [](const std::vector<Jet>& c) { return c[3]; });
        std::vector<Vec> pts;
        for (int i = 0; i < 5; ++i) pts.push_back(rng.uniform_vec(6, -1, 1));
        const auto rep = symplectization_check(q1, p1, pts, 1e-12);
        CHECK(rep.pass);
        CHECK(rep.max_bracket_residual < 1e-12);
    }
    SUBCASE("random quadratics at 50 points") {
        auto quad = [&](const std::string& name) {
            Mat a(5, 5);
            for (std::size_t i = 0; i < 5; ++i)
                for (std::size_t j = i; j < 5; ++j) {
                    a(i, j) = rng.uniform(-1, 1);
                    a(j, i) = a(i, j);
                }
            return ScalarField(c2, name, [a](const std::vector<Jet>& c) {
                Jet out(0.0, c[0].dim());
                for (std::size_t i = 0; i < 5; ++i)
                    for (std::size_t j = 0; j < 5; ++j)
                        out += 0.5 * a(i, j) * (c[i] * c[j]);
                return out;
            });
        };
        const ScalarField f = quad("f"), g = quad("g");
        std::vector<Vec> pts;
        for (int i = 0; i < 50; ++i) pts.push_back(rng.uniform_vec(6, -2, 2));
        const auto rep = symplectization_check(f, g, pts, 1e-10);
        CHECK(rep.pass);
        CHECK(rep.max_bracket_residual <= 1e-10);
        CHECK(rep.min_abs_det > 0.0);
    }
}

TEST_CASE("fd_field fallback matches exact jets within 1e-6") {
    Rng rng(31);
    DarbouxChart c1{1, "c1"};
    const ScalarField exact(c1, "f", [](const std::vector<Jet>& c) {
        return sin(c[1]) * exp(c[2] * 0.5) + sq(c[0]) * 0.3;
    });
    const ScalarField approx = fd_field(c1, "f_fd", [&](const Vec& x) {
        return std::sin(x[1]) * std::exp(0.5 * x[2]) + 0.3 * x[0] * x[0];
    });
    for (int i = 0; i < 10; ++i) {
        const Vec x = rng.uniform_vec(3, -1, 1);
        const Jet2 je = exact.eval(x);
        const Jet2 ja = approx.eval(x);
        CHECK(std::abs(je.value - ja.value) < 1e-12);
        for (std::size_t k = 0; k < 3; ++k)
            CHECK(std::abs(je.gradient[k] - ja.gradient[k]) <=
                  1e-6 * std::max(1.0, std::abs(je.gradient[k])));
        for (std::size_t a = 0; a < 3; ++a)
            for (std::size_t b = 0; b < 3; ++b)
                CHECK(std::abs(je.hess(a, b) - ja.hess(a, b)) <=
                      2e-5 * std::max(1.0, std::abs(je.hess(a, b))));
    }
}

TEST_CASE("domain errors carry the offending point") {
    DarbouxChart c1{1, "c1"};
    ScalarField f(c1, "1/q", [](const std::vector<Jet>& c) {
        return 1.0 / c[1];
    });
    const Vec bad{0.0, 0.0, 1.0};
    CHECK_THROWS_AS(f.eval(bad), DomainError);
    try {
        f.eval(bad);
    } catch (const DomainError& e) {
        CHECK(e.point() == bad);
    }
}
