#include <benchmark/benchmark.h>

#include <random>

#include "sampcap/linalg.hpp"
#include "sampcap/spectra.hpp"

namespace {

Eigen::MatrixXcd random_hermitian(Eigen::Index n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> N(0.0, 1.0);
  Eigen::MatrixXcd A(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) A(i, j) = sampcap::cplx(N(rng), N(rng));
  return 0.5 * (A + A.adjoint());
}

void BM_HermitianEigenvalues(benchmark::State& state) {
  const Eigen::MatrixXcd A = random_hermitian(state.range(0), 1);
  for (auto _ : state) benchmark::DoNotOptimize(sampcap::hermitian_eigenvalues(A));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_HermitianEigenvalues)->RangeMultiplier(2)->Range(2, 64)->Complexity(benchmark::oNCubed);

void BM_RealSymmetricEigenvalues(benchmark::State& state) {
  const Eigen::MatrixXcd A = random_hermitian(state.range(0), 2).real().cast<sampcap::cplx>();
  for (auto _ : state) benchmark::DoNotOptimize(sampcap::hermitian_eigenvalues(A));
}
BENCHMARK(BM_RealSymmetricEigenvalues)->RangeMultiplier(2)->Range(2, 64);

void BM_InvSqrt(benchmark::State& state) {
  const Eigen::MatrixXcd B = random_hermitian(state.range(0), 3);
  const Eigen::MatrixXcd A = B * B.adjoint() + Eigen::MatrixXcd::Identity(B.rows(), B.cols());
  for (auto _ : state) benchmark::DoNotOptimize(sampcap::inv_sqrt_psd(A));
}
BENCHMARK(BM_InvSqrt)->Arg(4)->Arg(16);

}  // namespace
