// Parallel kernel vs serial reference, and the closed-form evaluators.

#include <benchmark/benchmark.h>

#include "cachenet/analytic.hpp"
#include "cachenet/montecarlo.hpp"

using namespace cachenet;

namespace {

SimulationSpec spec(Policy policy, std::int64_t trials) {
  SimulationSpec s;
  s.policy = policy;
  s.trials = static_cast<std::uint64_t>(trials);
  return s;
}

void BM_Kernel(benchmark::State& state) {
  const auto policy = static_cast<Policy>(state.range(0));
  const SimulationSpec s = spec(policy, state.range(1));
  const NetworkParams p;
  for (auto _ : state) benchmark::DoNotOptimize(estimate_success(p, 0.25, s));
  state.SetItemsProcessed(state.iterations() * state.range(1));
}

void BM_Reference(benchmark::State& state) {
  const auto policy = static_cast<Policy>(state.range(0));
  const SimulationSpec s = spec(policy, state.range(1));
  const NetworkParams p;
  for (auto _ : state) benchmark::DoNotOptimize(estimate_success_reference(p, 0.25, s));
  state.SetItemsProcessed(state.iterations() * state.range(1));
}

void BM_SuccessDynamic(benchmark::State& state) {
  const NetworkParams p;
  for (auto _ : state) benchmark::DoNotOptimize(success_dynamic(p, 0.25));
}

void BM_SuccessStatic(benchmark::State& state) {
  const NetworkParams p;
  for (auto _ : state) benchmark::DoNotOptimize(success_static(p, 0.25));
}

}  // namespace

BENCHMARK(BM_Kernel)
    ->Args({static_cast<int>(Policy::static_assoc), 2000})
    ->Args({static_cast<int>(Policy::dynamic_assoc), 2000})
    ->Unit(benchmark::kMillisecond)
    ->UseRealTime();
BENCHMARK(BM_Reference)
    ->Args({static_cast<int>(Policy::static_assoc), 2000})
    ->Args({static_cast<int>(Policy::dynamic_assoc), 2000})
    ->Unit(benchmark::kMillisecond)
    ->UseRealTime();
BENCHMARK(BM_SuccessDynamic);
BENCHMARK(BM_SuccessStatic);

BENCHMARK_MAIN();
