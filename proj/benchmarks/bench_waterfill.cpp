#include <benchmark/benchmark.h>

#include <random>

#include "sampcap/waterfill.hpp"

namespace {

void BM_Waterfill(benchmark::State& state) {
  std::mt19937_64 rng(7);
  std::exponential_distribution<double> E(1.0);
  sampcap::ParallelChannelSet set;
  set.weight = 1.0 / static_cast<double>(state.range(0));
  for (int i = 0; i < state.range(0); ++i) set.gains.push_back(E(rng));
  for (auto _ : state) benchmark::DoNotOptimize(sampcap::waterfill(set, 10.0));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Waterfill)->RangeMultiplier(8)->Range(8, 1 << 15)->Complexity();

}  // namespace
