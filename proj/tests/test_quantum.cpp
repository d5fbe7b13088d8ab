#include "doctest.h"

#include <cmath>

#include "cosym/quantum.hpp"
#include "cosym/rng.hpp"

using namespace cosym;

namespace {

std::vector<Vec> random_states(Rng& rng, std::size_t dim, std::size_t count) {
    std::vector<Vec> pts;
    for (std::size_t i = 0; i < count; ++i)
        pts.push_back(rng.uniform_vec(dim, -1.5, 1.5));
    return pts;
}

} // namespace

TEST_CASE("observable fields of the Pauli basis") {
    const ScalarField h0 = observable_field(identity2(), "h0");
    const ScalarField h1 = observable_field(pauli_s(1), "h1");
    const ScalarField h2 = observable_field(pauli_s(2), "h2");
    const ScalarField h3 = observable_field(pauli_s(3), "h3");
    Rng rng(kDefaultSeed);

    SUBCASE("h0 and h3 evaluate to the printed quadratics") {
        for (int i = 0; i < 20; ++i) {
            const Vec x = rng.uniform_vec(5, -2, 2);
            const double q1 = x[1], q2 = x[2], p1 = x[3], p2 = x[4];
            CHECK(h0.value(x) ==
                  doctest::Approx(0.5 * (q1 * q1 + q2 * q2 + p1 * p1 + p2 * p2))
                      .epsilon(1e-14));
            CHECK(h3.value(x) ==
                  doctest::Approx(0.25 * (p1 * p1 + q1 * q1 - p2 * p2 - q2 * q2))
                      .epsilon(1e-14));
            CHECK(h1.value(x) ==
                  doctest::Approx(0.5 * (p1 * p2 + q1 * q2)).epsilon(1e-14));
            CHECK(h2.value(x) ==
                  doctest::Approx(0.5 * (q1 * p2 - q2 * p1)).epsilon(1e-14));
        }
    }
    SUBCASE("h0^2 = 4 (h1^2 + h2^2 + h3^2) at 100 random points") {
        for (int i = 0; i < 100; ++i) {
            const Vec x = rng.uniform_vec(5, -2, 2);
            const double lhs = h0.value(x) * h0.value(x);
            const double rhs =
                4.0 * (h1.value(x) * h1.value(x) + h2.value(x) * h2.value(x) +
                       h3.value(x) * h3.value(x));
            CHECK(std::abs(lhs - rhs) <= 1e-10);
        }
    }
    SUBCASE("{h1, h2} = h3 pointwise") {
        for (int i = 0; i < 20; ++i) {
            const Vec x = rng.uniform_vec(5, -2, 2);
            CHECK(poisson_bracket(h1, h2, x) ==
                  doctest::Approx(h3.value(x)).epsilon(1e-12));
        }
    }
    SUBCASE("non-Hermitian input is rejected") {
        CMatrix bad(2);
        bad(0, 1) = Complex(1.0, 0.0); // A != A^dagger
        CHECK_THROWS_AS(observable_field(bad), Error);
    }
}

TEST_CASE("schrodinger field reproduces the real-linear system") {
    Rng rng(kDefaultSeed);
    for (int trial = 0; trial < 6; ++trial) {
        const double b0 = rng.uniform(-1, 1), b1 = rng.uniform(-1, 1);
        const double b2 = rng.uniform(-1, 1), b3 = rng.uniform(-1, 1);
        const Envelope env = Envelope::one_plus_sin(0.5, 1.3);
        const ScalarField h = schrodinger_field(
            two_level_path(b0, b1, b2, b3, env));
        for (int i = 0; i < 10; ++i) {
            const Vec x = rng.uniform_vec(5, -1.5, 1.5);
            const FieldValue v = evolution_field(h, x);
            // explicit 4x4 matrix in the order (q1, p1, q2, p2)
            const double bt = env(x[0]);
            const double q1 = x[1], q2 = x[2], p1 = x[3], p2 = x[4];
            const double dq1 =
                0.5 * bt * ((2 * b0 + b3) * p1 - b2 * q2 + b1 * p2);
            const double dp1 =
                0.5 * bt * (-(2 * b0 + b3) * q1 - b1 * q2 - b2 * p2);
            const double dq2 =
                0.5 * bt * (b2 * q1 + b1 * p1 + (2 * b0 - b3) * p2);
            const double dp2 =
                0.5 * bt * (-b1 * q1 + b2 * p1 - (2 * b0 - b3) * q2);
            CHECK(std::abs(v.components[1] - dq1) <= 1e-12);
            CHECK(std::abs(v.components[2] - dq2) <= 1e-12);
            CHECK(std::abs(v.components[3] - dp1) <= 1e-12);
            CHECK(std::abs(v.components[4] - dp2) <= 1e-12);
            CHECK(v.components[0] == 1.0);
        }
    }
}

TEST_CASE("closed-form phase evolution of the S3 eigenstate") {
    const ScalarField h = schrodinger_field(two_level_path(0, 0, 0, 1));
    const Vec x0 = quantum_state(0.0, {Complex(1, 0), Complex(0, 0)});
    const auto traj = integrate(FieldKind::evolution, h, x0, 0.0, 3.0,
                                IntegratorConfig::rk45(1e-12));
    REQUIRE(traj.completed());
    for (std::size_t i = 0; i < traj.states.size(); i += 5) {
        const double t = traj.times[i];
        const auto psi = psi_from_state(traj.states[i]);
        // psi(t) = e^{-i t / 2} (1, 0)
        const Complex expect = std::exp(Complex(0, -0.5 * t));
        CHECK(std::abs(psi[0] - expect) <= 1e-9);
        CHECK(std::abs(psi[1]) <= 1e-9);
    }
}

TEST_CASE("norm function is conserved along the flow") {
    const ScalarField h = schrodinger_field(
        two_level_path(0.2, 0.4, -0.3, 0.9, Envelope::one_plus_sin(0.5)));
    const ScalarField h0 = observable_field(identity2(), "h0");
    const Vec x0 = quantum_state(0.0, {Complex(0.6, 0.2), Complex(-0.4, 0.5)});
    const auto traj = integrate(FieldKind::evolution, h, x0, 0.0, 10.0,
                                IntegratorConfig::rk45(1e-10));
    REQUIRE(traj.completed());
    const auto mon = monitor(traj, {h0});
    CHECK(mon[0].max_drift <= 1e-8);
}

TEST_CASE("commutation table of the Pauli Hamiltonian fields") {
    const ScalarField h0 = observable_field(identity2(), "h0");
    const ScalarField h1 = observable_field(pauli_s(1), "h1");
    const ScalarField h2 = observable_field(pauli_s(2), "h2");
    const ScalarField h3 = observable_field(pauli_s(3), "h3");
    auto xf = [](const ScalarField& f) {
        return [f](const Vec& y) { return hamiltonian_field(f, y); };
    };
    Rng rng(3);
    for (int i = 0; i < 5; ++i) {
        const Vec x = rng.uniform_vec(5, -1, 1);
        // [X0, Xj] = 0
        for (const ScalarField* f : {&h1, &h2, &h3}) {
            const FieldValue br = fd_lie_bracket(xf(h0), xf(*f), x);
            CHECK(br.norm() <= 1e-6);
        }
        // [X1, X2] = -X3 and cyclic permutations
        auto check_pair = [&](const ScalarField& a, const ScalarField& b,
                              const ScalarField& c) {
            const FieldValue br = fd_lie_bracket(xf(a), xf(b), x);
            const FieldValue expect = hamiltonian_field(c, x);
            Vec sum = br.components;
            for (std::size_t k = 0; k < sum.size(); ++k)
                sum[k] += expect.components[k];
            CHECK(norm(sum) <= 1e-6);
        };
        check_pair(h1, h2, h3);
        check_pair(h2, h3, h1);
        check_pair(h3, h1, h2);
    }
}

TEST_CASE("u1 action invariance and cocycle") {
    Rng rng(kDefaultSeed);
    const SymmetryAction action = u1_action(2);
    SUBCASE("J coincides with h0 for n = 2") {
        const ScalarField h0 = observable_field(identity2(), "h0");
        for (int i = 0; i < 10; ++i) {
            const Vec x = rng.uniform_vec(5, -2, 2);
            CHECK(action.J[0].value(x) ==
                  doctest::Approx(h0.value(x)).epsilon(1e-14));
        }
    }
    SUBCASE("invariance of random-parameter Hamiltonians") {
        for (int trial = 0; trial < 10; ++trial) {
            const ScalarField h = schrodinger_field(two_level_path(
                rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1),
                rng.uniform(-1, 1), Envelope::one_plus_sin(0.3)));
            const Vec x = rng.uniform_vec(5, -1.5, 1.5);
            const FieldValue xi = action.fundamental_field(0, x);
            CHECK(std::abs(directional_derivative(h, xi, x)) <= 1e-10);
        }
    }
    SUBCASE("one-dimensional algebra has zero cocycle form") {
        const auto rep = cocycle_form(action, random_states(rng, 5, 10));
        CHECK(rep.constant);
        CHECK(std::abs(rep.sigma(0, 0)) <= 1e-14);
    }
}

TEST_CASE("eigenvector certification") {
    SUBCASE("S3 system certifies exactly the coordinate rays") {
        const HermitianPath path =
            two_level_path(0.0, 0.0, 0.0, 1.0, Envelope::one_plus_sin(0.5));
        const std::vector<double> times{0.0, 0.7, 1.9, 3.1};
        const auto result = rep_eigenvector_certify(path, times, 1e-9);
        REQUIRE(result.rays.size() == 2);
        CHECK_FALSE(result.degenerate_spectrum);
        // rays are span{(1,0)} and span{(0,1)} with the positive-phase fix
        double best0 = 0.0, best1 = 0.0;
        for (const auto& ray : result.rays) {
            best0 = std::max(best0, std::abs(ray.psi[0]));
            best1 = std::max(best1, std::abs(ray.psi[1]));
            CHECK(ray.eigen_residual <= 1e-9);
            CHECK(ray.rep_checked);
            CHECK(ray.rep_agreement <= 1e-8);
        }
        CHECK(best0 == doctest::Approx(1.0).epsilon(1e-10));
        CHECK(best1 == doctest::Approx(1.0).epsilon(1e-10));
    }
    SUBCASE("rotating eigenvector directions certify nothing") {
        const HermitianPath path = HermitianPath::free_form(2, [](double t) {
            CMatrix m(2);
            const CMatrix s1 = pauli_s(1), s3 = pauli_s(3);
            for (std::size_t k = 0; k < 4; ++k)
                m.a[k] = std::sin(t) * s1.a[k] + std::cos(t) * s3.a[k];
            return m;
        });
        const std::vector<double> times{0.0, 0.5, 1.0, 2.0};
        const auto result = rep_eigenvector_certify(path, times, 1e-9);
        CHECK(result.rays.empty());
    }
    SUBCASE("diagonal three-level system keeps three rays") {
        CMatrix base(3);
        base(0, 0) = 1.0;
        base(1, 1) = 2.0;
        base(2, 2) = 3.0;
        const HermitianPath path =
            HermitianPath::from_base(base, Envelope::one_plus_sin(0.25, 0.8));
        const auto result =
            rep_eigenvector_certify(path, {0.0, 1.0, 2.0}, 1e-9);
        CHECK(result.rays.size() == 3);
        for (const auto& ray : result.rays) {
            CHECK(ray.rep_checked);
            CHECK(ray.rep_agreement <= 1e-8);
        }
    }
    SUBCASE("degenerate spectra are flagged") {
        const HermitianPath path = two_level_path(1.0, 0.0, 0.0, 0.0);
        const auto result = rep_eigenvector_certify(path, {0.0, 1.0}, 1e-9);
        CHECK(result.degenerate_spectrum);
    }
}

TEST_CASE("unitarity surrogate: inner products conserved pairwise") {
    const ScalarField h = schrodinger_field(
        two_level_path(0.1, 0.7, -0.2, 0.5, Envelope::one_plus_sin(0.5)));
    const Vec a0 = quantum_state(0.0, {Complex(1, 0), Complex(0, 0)});
    const Vec b0 = quantum_state(0.0, {Complex(0.3, 0.4), Complex(0.5, -0.6)});
    const auto cfg = IntegratorConfig::rk45(1e-11);
    const auto ta = integrate(FieldKind::evolution, h, a0, 0.0, 10.0, cfg);
    const auto tb = integrate(FieldKind::evolution, h, b0, 0.0, 10.0, cfg);
    REQUIRE(ta.completed());
    REQUIRE(tb.completed());
    // re-integrate b to the accepted times of a for aligned sampling
    auto inner = [](const Vec& xa, const Vec& xb) {
        const auto pa = psi_from_state(xa), pb = psi_from_state(xb);
        Complex s(0, 0);
        for (std::size_t j = 0; j < pa.size(); ++j)
            s += std::conj(pa[j]) * pb[j];
        return s;
    };
    const Complex c0 = inner(a0, b0);
    for (std::size_t i = 10; i < ta.times.size(); i += 25) {
        const double t = ta.times[i];
        const auto segb =
            integrate(FieldKind::evolution, h, b0, 0.0, t, cfg);
        const Complex ct = inner(ta.states[i], segb.back());
        CHECK(std::abs(ct - c0) <= 1e-8);
    }
}

TEST_CASE("projection stationarity over [0, 10]") {
    const ScalarField h = schrodinger_field(
        two_level_path(0.0, 0.0, 0.0, 1.0, Envelope::one_plus_sin(0.5)));
    const SymmetryAction action = u1_action(2);
    const REPCandidate cand = find_rep(h, action, Vec{1.0, 0.0, 0.0, 0.0},
                                       chebyshev_times(0.0, 10.0), 1e-10);
    REQUIRE(cand.certified);
    const Vec x0{0.0, cand.z_e[0], cand.z_e[1], cand.z_e[2], cand.z_e[3]};
    const auto traj = integrate(FieldKind::evolution, h, x0, 0.0, 10.0,
                                IntegratorConfig::rk45(1e-11));
    REQUIRE(traj.completed());
    const double phi0 = hopf_phi(traj.front());
    const Vec b0 = bloch_vector(traj.front());
    double worst = 0.0;
    for (const auto& x : traj.states) {
        worst = std::max(worst, std::abs(hopf_phi(x) - phi0));
        worst = std::max(worst, max_abs_diff(bloch_vector(x), b0));
    }
    CHECK(worst <= 1e-6);
}
