#include <benchmark/benchmark.h>

#include <cstdint>

#include "hyperpi/estimator.hpp"
#include "hyperpi/sampling.hpp"

namespace {

using hyperpi::Dimension;
using hyperpi::SeedSpec;

// Sampling throughput; the per-iteration item count is sample points, so the
// reported items/s is directly comparable against the performance envelope.
void BM_CountHits(benchmark::State& state) {
    const Dimension d(static_cast<unsigned>(state.range(0)));
    const std::uint64_t trials = static_cast<std::uint64_t>(state.range(1));
    const SeedSpec seed{42, 0};
    for (auto _ : state) {
        benchmark::DoNotOptimize(hyperpi::count_hits(seed, d, trials));
    }
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) *
                            static_cast<std::int64_t>(trials));
}

void BM_RawBlocks(benchmark::State& state) {
    hyperpi::PhiloxEngine engine({42, 0});
    for (auto _ : state) {
        benchmark::DoNotOptimize(engine.next_u64());
    }
    state.SetItemsProcessed(state.iterations());
}

void BM_EstimatePipeline(benchmark::State& state) {
    const Dimension d(5);
    const std::uint64_t trials = 100000;
    std::uint64_t stream = 0;
    for (auto _ : state) {
        const auto tally = hyperpi::count_hits({42, stream++}, d, trials);
        benchmark::DoNotOptimize(hyperpi::estimate_pi(tally));
    }
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) *
                            static_cast<std::int64_t>(trials));
}

}  // namespace

BENCHMARK(BM_CountHits)
    ->Args({2, 1 << 20})
    ->Args({6, 1 << 20})
    ->Args({20, 1 << 18})
    ->Unit(benchmark::kMillisecond);
BENCHMARK(BM_RawBlocks);
BENCHMARK(BM_EstimatePipeline)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
