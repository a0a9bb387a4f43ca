#include <benchmark/benchmark.h>

#include "sampcap/sampcap.hpp"

namespace {

// One point of the multiband sweep with an optimal M-branch bank.
void BM_OptimalBankRate(benchmark::State& state) {
  const sampcap::NamedChannel mb = sampcap::multiband_channel();
  const int M = static_cast<int>(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(sampcap::optimal_filterbank(mb.H, mb.S_eta, 0.45, M, 10.0).capacity.capacity());
}
BENCHMARK(BM_OptimalBankRate)->Arg(1)->Arg(2)->Arg(4);

// Full 20-rate sweep with the optimal single prefilter.
void BM_SingleFilterSweep(benchmark::State& state) {
  const sampcap::NamedChannel mb = sampcap::multiband_channel();
  for (auto _ : state)
    for (int i = 1; i <= 20; ++i)
      benchmark::DoNotOptimize(sampcap::optimal_prefilter(mb.H, mb.S_eta, 0.05 * i, 10.0).capacity.capacity());
}
BENCHMARK(BM_SingleFilterSweep);

void BM_OracleFlat(benchmark::State& state) {
  const sampcap::NamedChannel ch = sampcap::flat_channel(0.5);
  const auto S = sampcap::SpectralFunction::constant(-0.5, 0.5, 1.0, sampcap::SpectrumKind::prefilter);
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(sampcap::finite_capacity(sampcap::discretize(ch.H, ch.S_eta, {S}, 1.0, n, 8), 5.0));
}
BENCHMARK(BM_OracleFlat)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
