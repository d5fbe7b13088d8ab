#include "doctest.h"

#include <cmath>

#include "cosym/linalg.hpp"
#include "cosym/rng.hpp"

using namespace cosym;

namespace {

Mat random_matrix(Rng& rng, std::size_t r, std::size_t c) {
    Mat m(r, c);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j) m(i, j) = rng.uniform(-1, 1);
    return m;
}

} // namespace

TEST_CASE("lu_solve solves random systems") {
    Rng rng(1);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t n = 2 + trial % 6;
        Mat a = random_matrix(rng, n, n);
        for (std::size_t i = 0; i < n; ++i) a(i, i) += 3.0;
        const Vec x_true = rng.uniform_vec(n, -2, 2);
        const Vec b = a * x_true;
        const Vec x = lu_solve(a, b);
        CHECK(max_abs_diff(x, x_true) < 1e-11);
    }
}

TEST_CASE("svd reconstructs and orthogonalizes") {
    Rng rng(2);
    for (int trial = 0; trial < 15; ++trial) {
        const std::size_t m = 3 + trial % 4, n = 2 + trial % 3;
        const Mat a = random_matrix(rng, m, n);
        const Svd d = svd(a);
        // reconstruction
        Mat recon(m, n);
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                double s = 0.0;
                for (std::size_t k = 0; k < d.s.size(); ++k)
                    s += d.u(i, k) * d.s[k] * d.v(j, k);
                recon(i, j) = s;
            }
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < n; ++j)
                CHECK(recon(i, j) == doctest::Approx(a(i, j)).epsilon(1e-10));
        // descending order
        for (std::size_t k = 1; k < d.s.size(); ++k) CHECK(d.s[k - 1] >= d.s[k]);
    }
}

TEST_CASE("nullspace of a rank-deficient matrix") {
    // rows span a 2-dim subspace of R^4
    Mat a(3, 4);
    a(0, 0) = 1; a(0, 1) = 2; a(0, 2) = 0; a(0, 3) = 1;
    a(1, 0) = 2; a(1, 1) = 4; a(1, 2) = 0; a(1, 3) = 2; // duplicate row
    a(2, 0) = 0; a(2, 1) = 0; a(2, 2) = 1; a(2, 3) = -1;
    const auto ker = nullspace(a);
    CHECK(ker.size() == 2);
    for (const auto& v : ker) {
        const Vec av = a * v;
        CHECK(norm(av) < 1e-10);
        CHECK(norm(v) == doctest::Approx(1.0));
    }
}

TEST_CASE("jacobi eigensolver on a known matrix") {
    Mat a(3, 3);
    a(0, 0) = 2; a(0, 1) = 1; a(1, 0) = 1;
    a(1, 1) = 2; a(1, 2) = 1; a(2, 1) = 1;
    a(2, 2) = 2;
    const SymEig e = jacobi_eigensymmetric(a);
    // analytic eigenvalues 2 - sqrt(2), 2, 2 + sqrt(2)
    CHECK(e.values[0] == doctest::Approx(2 - std::sqrt(2.0)).epsilon(1e-12));
    CHECK(e.values[1] == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(e.values[2] == doctest::Approx(2 + std::sqrt(2.0)).epsilon(1e-12));
    // residual ||A v - lambda v||
    for (std::size_t k = 0; k < 3; ++k) {
        const Vec v = e.vectors.column(k);
        const Vec av = a * v;
        CHECK(max_abs_diff(av, scale(e.values[k], v)) < 1e-12);
    }
}

TEST_CASE("pinv_solve handles rank deficiency with the min-norm solution") {
    Mat a(2, 3);
    a(0, 0) = 1;
    a(1, 1) = 1; // third column zero
    const Vec x = pinv_solve(a, Vec{2.0, 3.0});
    CHECK(x[0] == doctest::Approx(2.0));
    CHECK(x[1] == doctest::Approx(3.0));
    CHECK(x[2] == doctest::Approx(0.0));
}

TEST_CASE("subspace comparison by containment gaps") {
    const Vec e1{1, 0, 0, 0}, e2{0, 1, 0, 0}, e3{0, 0, 1, 0};
    double gap = 0.0;
    CHECK(subspaces_equal({e1, e2}, {e2, e1}, 1e-12, &gap));
    CHECK(gap < 1e-14);
    CHECK_FALSE(subspaces_equal({e1, e2}, {e1, e3}, 1e-9));
    // rotated basis of the same plane
    const double c = std::cos(0.7), s = std::sin(0.7);
    const Vec r1{c, s, 0, 0}, r2{-s, c, 0, 0};
    CHECK(subspaces_equal({e1, e2}, {r1, r2}, 1e-12));
}
