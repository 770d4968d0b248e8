#include <benchmark/benchmark.h>

#include "kfwer/bounds.h"
#include "kfwer/dist.h"
#include "kfwer/gaussian_tails.h"
#include "kfwer/mc_sim.h"

namespace {

void BM_NormalUpperQuantile(benchmark::State& state) {
  double q = 1e-3;
  for (auto _ : state) {
    benchmark::DoNotOptimize(kfwer::normal_upper_quantile(q));
    q = q < 1e-200 ? 1e-3 : q * 0.5;
  }
}
BENCHMARK(BM_NormalUpperQuantile);

void BM_MonhorIntegral(benchmark::State& state) {
  const double rho = static_cast<double>(state.range(0)) / 100.0;
  for (auto _ : state) benchmark::DoNotOptimize(kfwer::monhor_raw_integral(rho, 3.0233));
}
BENCHMARK(BM_MonhorIntegral)->Arg(10)->Arg(30)->Arg(90);

void BM_JointTailEquicorr(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(kfwer::joint_tail_equicorr(m, 3.0233, 0.2));
}
BENCHMARK(BM_JointTailEquicorr)->Arg(2)->Arg(25)->Arg(75);

void BM_LogJointTailsSequence(benchmark::State& state) {
  const int max_m = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(kfwer::log_joint_tails_equicorr(max_m, 3.0233, 0.2));
}
BENCHMARK(BM_LogJointTailsSequence)->Arg(25)->Arg(75);

void BM_ProposedBound(benchmark::State& state) {
  const auto config = kfwer::TestConfig::make(1000, static_cast<int>(state.range(0)), 0.05);
  for (auto _ : state) benchmark::DoNotOptimize(kfwer::proposed_bound_equicorr(config, 0.2));
}
BENCHMARK(BM_ProposedBound)->Arg(25)->Arg(75)->Unit(benchmark::kMillisecond);

void BM_EstimateKfwer(benchmark::State& state) {
  const auto config = kfwer::TestConfig::make(1000, 50, 0.05);
  const kfwer::SimSpec spec{config, 0.2, kfwer::lr_cutoff(config),
                            static_cast<std::uint64_t>(state.range(0)), 1};
  for (auto _ : state) benchmark::DoNotOptimize(kfwer::estimate_kfwer(spec, 1));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_EstimateKfwer)->Arg(1000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
