#include <benchmark/benchmark.h>

#include <vector>

#include "mann/ensemble.hpp"

using namespace mann;

namespace {

std::vector<RunConfig> batch(int n) {
  RunConfig base;
  base.horizon = 2.0;
  base.scenario = ScenarioScript({{1.0, std::nullopt, EventKind::Scale, 20.0}});
  std::vector<std::uint64_t> seeds;
  for (int i = 0; i < n; ++i) seeds.push_back(static_cast<std::uint64_t>(i + 1));
  return seed_variants(base, seeds);
}

void BM_BatchSerial(benchmark::State& state) {
  const auto runs = batch(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(run_batch_serial(runs));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_BatchParallel(benchmark::State& state) {
  const auto runs = batch(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(run_batch_parallel(runs));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_ClosedLoopDerivative(benchmark::State& state) {
  RunConfig run;
  auto s = init_closed_loop(run);
  s.x << 0.2, -0.1;
  for (auto _ : state) benchmark::DoNotOptimize(closed_loop_derivative(0.5, s, run));
}

}  // namespace

BENCHMARK(BM_BatchSerial)->Arg(3)->Arg(8)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BatchParallel)->Arg(3)->Arg(8)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ClosedLoopDerivative)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
