#include <benchmark/benchmark.h>

#include "hyperpi/specfn.hpp"

namespace {

using hyperpi::Dimension;

void BM_LogGamma(benchmark::State& state) {
    double x = 0.5;
    for (auto _ : state) {
        benchmark::DoNotOptimize(hyperpi::log_gamma(x));
        x += 0.25;
        if (x > 200.0) x = 0.5;
    }
}

void BM_PiRecovery(benchmark::State& state) {
    const Dimension d(static_cast<unsigned>(state.range(0)));
    const double p = hyperpi::inside_probability(d);
    for (auto _ : state) {
        benchmark::DoNotOptimize(hyperpi::pi_from_probability(p, d));
    }
}

}  // namespace

BENCHMARK(BM_LogGamma);
BENCHMARK(BM_PiRecovery)->Arg(2)->Arg(10)->Arg(50);
