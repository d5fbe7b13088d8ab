#include <benchmark/benchmark.h>

#include "cosym/integrate.hpp"
#include "cosym/threebody.hpp"

using namespace cosym;

namespace {

void BM_Rk45ThreeBodyOrbit(benchmark::State& state) {
    ThreeBodyParams p;
    p.mu = 0.99;
    const ScalarField h = three_body_hamiltonian(p);
    const Vec x0{0.0, 1.5, 0.0, 0.0, 2.25};
    const double tol = std::pow(10.0, -static_cast<double>(state.range(0)));
    const auto cfg = IntegratorConfig::rk45(tol);
    for (auto _ : state) {
        const auto traj = integrate(FieldKind::evolution, h, x0, 0.0, 2.0, cfg);
        benchmark::DoNotOptimize(traj.states.back().data());
    }
    state.SetLabel("tol=1e-" + std::to_string(state.range(0)));
}
BENCHMARK(BM_Rk45ThreeBodyOrbit)->Arg(8)->Arg(10)->Arg(12);

void BM_Rk4Harmonic(benchmark::State& state) {
    DarbouxChart chart{1, "harmonic"};
    const ScalarField h(chart, "h", [](const std::vector<Jet>& c) {
        return 0.5 * (sq(c[1]) + sq(c[2]));
    });
    const auto cfg = IntegratorConfig::rk4(1e-3);
    for (auto _ : state) {
        const auto traj =
            integrate(FieldKind::evolution, h, {0.0, 1.0, 0.0}, 0.0, 1.0, cfg);
        benchmark::DoNotOptimize(traj.states.back().data());
    }
}
BENCHMARK(BM_Rk4Harmonic);

} // namespace
