#include <benchmark/benchmark.h>

#include "cosym/threebody.hpp"

using namespace cosym;

namespace {

void BM_ThreeBodyJet(benchmark::State& state) {
    ThreeBodyParams p;
    p.mu = 0.99;
    const ScalarField h = three_body_hamiltonian(p);
    const Vec x{0.3, 1.5, 0.7, 0.05, 2.2};
    for (auto _ : state) {
        const Jet2 j = h.eval(x);
        benchmark::DoNotOptimize(j.value);
        benchmark::DoNotOptimize(j.hessian.data());
    }
}
BENCHMARK(BM_ThreeBodyJet);

void BM_ThreeBodyFieldValue(benchmark::State& state) {
    ThreeBodyParams p;
    p.mu = 0.99;
    const ScalarField h = three_body_hamiltonian(p);
    const Vec x{0.3, 1.5, 0.7, 0.05, 2.2};
    for (auto _ : state) {
        const FieldValue v = evolution_field(h, x);
        benchmark::DoNotOptimize(v.components.data());
    }
}
BENCHMARK(BM_ThreeBodyFieldValue);

} // namespace
