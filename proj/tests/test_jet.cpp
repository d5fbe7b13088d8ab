#include "doctest.h"

#include <cmath>
#include <functional>

#include "cosym/jet.hpp"
#include "cosym/rng.hpp"

using namespace cosym;

namespace {

// Independent finite-difference oracle for jet derivatives.
double fd_grad(const std::function<double(const std::vector<double>&)>& f,
               std::vector<double> x, std::size_t i, double h) {
    x[i] += h;
    const double fp = f(x);
    x[i] -= 2 * h;
    const double fm = f(x);
    return (fp - fm) / (2 * h);
}

double fd_hess(const std::function<double(const std::vector<double>&)>& f,
               std::vector<double> x, std::size_t i, std::size_t j, double h) {
    if (i == j) {
        const double f0 = f(x);
        x[i] += h;
        const double fp = f(x);
        x[i] -= 2 * h;
        const double fm = f(x);
        return (fp - 2 * f0 + fm) / (h * h);
    }
    auto shift = [&](double di, double dj) {
        auto y = x;
        y[i] += di;
        y[j] += dj;
        return f(y);
    };
    return (shift(h, h) - shift(h, -h) - shift(-h, h) + shift(-h, -h)) /
           (4 * h * h);
}

Jet test_expr(const std::vector<Jet>& c) {
    // mixes products, quotients, trig, exp, sqrt
    return sin(c[0] * c[1]) + exp(c[2] * 0.3) / (1.0 + sq(c[1])) +
           sqrt(2.0 + c[0]) * cos(c[2]) - c[0] * c[1] * c[2] * 0.25;
}

double test_expr_d(const std::vector<double>& x) {
    return std::sin(x[0] * x[1]) + std::exp(0.3 * x[2]) / (1.0 + x[1] * x[1]) +
           std::sqrt(2.0 + x[0]) * std::cos(x[2]) - 0.25 * x[0] * x[1] * x[2];
}

} // namespace

TEST_CASE("jet arithmetic matches finite differences of values") {
    Rng rng(kDefaultSeed);
    const double h = 1e-4;
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<double> x = rng.uniform_vec(3, -1.0, 1.0);
        std::vector<Jet> c;
        for (std::size_t i = 0; i < 3; ++i)
            c.push_back(Jet::variable(x[i], i, 3));
        const Jet out = test_expr(c);
        CHECK(out.value() == doctest::Approx(test_expr_d(x)).epsilon(1e-14));
        for (std::size_t i = 0; i < 3; ++i) {
            const double g = fd_grad(test_expr_d, x, i, h);
            CHECK(std::abs(out.grad(i) - g) <=
                  1e-6 * std::max(1.0, std::abs(g)));
            for (std::size_t j = 0; j < 3; ++j) {
                const double hh = fd_hess(test_expr_d, x, i, j, h);
                CHECK(std::abs(out.hess(i, j) - hh) <=
                      1e-5 * std::max(1.0, std::abs(hh)));
            }
        }
    }
}

TEST_CASE("jet hessians are symmetric") {
    Rng rng(7);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<Jet> c;
        for (std::size_t i = 0; i < 3; ++i)
            c.push_back(Jet::variable(rng.uniform(-2, 2), i, 3));
        const Jet out = test_expr(c);
        for (std::size_t i = 0; i < 3; ++i)
            for (std::size_t j = 0; j < 3; ++j)
                CHECK(out.hess(i, j) ==
                      doctest::Approx(out.hess(j, i)).epsilon(1e-12));
    }
}

TEST_CASE("seeded variables and constants") {
    const Jet v = Jet::variable(2.5, 1, 4);
    CHECK(v.value() == 2.5);
    CHECK(v.grad(0) == 0.0);
    CHECK(v.grad(1) == 1.0);
    const Jet c(3.0, 4);
    CHECK(c.grad(1) == 0.0);
    const Jet p = pow(v, 3);
    CHECK(p.value() == doctest::Approx(15.625));
    CHECK(p.grad(1) == doctest::Approx(3 * 2.5 * 2.5));
    CHECK(p.hess(1, 1) == doctest::Approx(6 * 2.5));
}

TEST_CASE("powm32 matches pow(-1.5)") {
    Rng rng(3);
    for (int trial = 0; trial < 20; ++trial) {
        const double x = rng.uniform(0.3, 4.0);
        const Jet v = Jet::variable(x, 0, 1);
        const Jet a = powm32(v);
        CHECK(a.value() == doctest::Approx(std::pow(x, -1.5)).epsilon(1e-14));
        CHECK(a.grad(0) ==
              doctest::Approx(-1.5 * std::pow(x, -2.5)).epsilon(1e-12));
        CHECK(a.hess(0, 0) ==
              doctest::Approx(3.75 * std::pow(x, -3.5)).epsilon(1e-12));
    }
}

TEST_CASE("dimension mismatch throws") {
    const Jet a = Jet::variable(1.0, 0, 2);
    const Jet b = Jet::variable(1.0, 0, 3);
    CHECK_THROWS_AS(a + b, DimensionError);
}
