#include <benchmark/benchmark.h>

#include "bzfam/dimension.hpp"
#include "bzfam/family.hpp"
#include "bzfam/weil_deligne.hpp"
#include "oracles.hpp"
#include "scenarios.hpp"

using namespace bzfam;

static void BM_ClosureOfSingletons(benchmark::State& state) {
  std::vector<std::int64_t> pts;
  for (std::int64_t i = 0; i < state.range(0); ++i) pts.push_back(i / 2);
  const auto top = oracle::singletons(pts);
  for (auto _ : state) benchmark::DoNotOptimize(downward_closure_graph(top));
}
BENCHMARK(BM_ClosureOfSingletons)->DenseRange(4, 8, 2);

static void BM_AlternatingSum(benchmark::State& state) {
  const PrimePower q(13, 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(parabolic_alternating_sum(static_cast<int>(state.range(0)), q));
  }
}
BENCHMARK(BM_AlternatingSum)->DenseRange(4, 12, 4);

static void BM_ExpNilpotent(benchmark::State& state) {
  const auto p = sp_partition(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(exp_nilpotent(p));
}
BENCHMARK(BM_ExpNilpotent)->RangeMultiplier(2)->Range(4, 32);

static void BM_Pipeline(benchmark::State& state) {
  gen::Rng rng(5);
  const auto g = gen::twist_constant(rng, 3, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(run_pipeline(g.scenario, g.x0));
}
BENCHMARK(BM_Pipeline)->DenseRange(3, 6, 3);
BENCHMARK_MAIN();
