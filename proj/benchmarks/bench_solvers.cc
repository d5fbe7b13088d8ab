#include <benchmark/benchmark.h>

#include "cosym/quantum.hpp"
#include "cosym/stability.hpp"
#include "cosym/threebody.hpp"

using namespace cosym;

namespace {

void BM_SolveCollinear(benchmark::State& state) {
    ThreeBodyParams p;
    p.mu = 0.99;
    for (auto _ : state) {
        const auto pts = solve_collinear(p);
        benchmark::DoNotOptimize(pts.data());
    }
}
BENCHMARK(BM_SolveCollinear);

void BM_SpectralScanTwoLevel(benchmark::State& state) {
    const ScalarField h = schrodinger_field(two_level_path(0, 0, 0, 1));
    const SymmetryAction action = u1_action(2);
    const std::vector<double> grid{0, 2, 4, 6, 8, 10};
    const REPCandidate cand =
        find_rep(h, action, Vec{1.0, 0.0, 0.0, 0.0}, grid, 1e-10);
    for (auto _ : state) {
        const auto scan = spectral_scan(h, action, cand, {0.5}, grid, 0.3,
                                        static_cast<std::size_t>(state.range(0)));
        benchmark::DoNotOptimize(scan.inf_lambda_min);
    }
    state.SetLabel("ball_samples=" + std::to_string(state.range(0)));
}
BENCHMARK(BM_SpectralScanTwoLevel)->Arg(50)->Arg(200);

void BM_FindRepTwoLevel(benchmark::State& state) {
    const ScalarField h = schrodinger_field(two_level_path(0, 1, 0, 0));
    const SymmetryAction action = u1_action(2);
    const std::vector<double> grid = chebyshev_times(0.0, 5.0);
    for (auto _ : state) {
        const auto cand =
            find_rep(h, action, Vec{0.7, 0.71, 0.01, 0.0}, grid, 1e-10);
        benchmark::DoNotOptimize(cand.residuals.data());
    }
}
BENCHMARK(BM_FindRepTwoLevel);

} // namespace
