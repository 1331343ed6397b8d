#include <benchmark/benchmark.h>

#include "discbal/oracle.hpp"
#include "discbal/sampler.hpp"
#include "discbal/strategies.hpp"

namespace {

using namespace discbal;

void BM_SampleInstance(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::uint64_t trial = 0;
  for (auto _ : state) benchmark::DoNotOptimize(sample_instance(n, 4, n, SeedSpec{1, trial++}));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SampleInstance)->Arg(1 << 14)->Arg(1 << 20)->Unit(benchmark::kMillisecond);

void BM_RunOnline(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto kind = static_cast<StrategyKind>(state.range(1));
  const SeedSpec seed{2};
  const Instance inst = sample_instance(n, 4, n, seed);
  StrategyParams params{kind, kDefaultCAlg, 5.0, n};
  for (auto _ : state) benchmark::DoNotOptimize(run_online(inst, params, seed).trace.max_prefix_disc());
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_RunOnline)
    ->ArgsProduct({{1 << 14, 1 << 20},
                   {static_cast<long>(StrategyKind::alg1), static_cast<long>(StrategyKind::random),
                    static_cast<long>(StrategyKind::greedy), static_cast<long>(StrategyKind::majority)}})
    ->Unit(benchmark::kMillisecond);

void BM_OfflineOracle(benchmark::State& state) {
  const auto T = static_cast<std::size_t>(state.range(0));
  const Instance inst = sample_instance(T, 3, T, SeedSpec{3});
  for (auto _ : state) benchmark::DoNotOptimize(offline_min_disc(inst).value);
}
BENCHMARK(BM_OfflineOracle)->DenseRange(12, 20, 4)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
