#pragma once

// Reference computations shared by the tests. None of these call into the
// solvers under test beyond SpectralFunction evaluation.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <utility>
#include <vector>

#include "sampcap/sampcap.hpp"

namespace support {

using sampcap::cplx;
using sampcap::SpectralFunction;

struct RefWaterfill {
  double nu = 0.0;
  double capacity = 0.0;
};

// Water level found by walking the sorted gains; no bisection.
inline RefWaterfill sorted_waterfill(std::vector<double> gains, double weight, double P) {
  gains.erase(std::remove_if(gains.begin(), gains.end(), [](double g) { return !(g > 0.0); }),
              gains.end());
  std::sort(gains.begin(), gains.end(), std::greater<>());
  RefWaterfill out;
  if (gains.empty() || P == 0.0) return out;
  double inv_sum = 0.0;
  for (std::size_t k = 1; k <= gains.size(); ++k) {
    inv_sum += 1.0 / gains[k - 1];
    const double nu = (P / weight + inv_sum) / static_cast<double>(k);
    const bool last_active = nu > 1.0 / gains[k - 1];
    const bool next_inactive = k == gains.size() || nu <= 1.0 / gains[k];
    if (last_active && next_inactive) {
      out.nu = nu;
      for (std::size_t i = 0; i < k; ++i) out.capacity += weight * 0.5 * std::log(nu * gains[i]);
      return out;
    }
  }
  return out;
}

struct Alias {
  int l;
  cplx h;
  double noise;
  double snr() const { return noise > 0.0 ? std::norm(h) / noise : 0.0; }
};

// Every l in [-range, range] whose image f - l*spacing sees channel or noise.
inline std::vector<Alias> scan_aliases(const SpectralFunction& H, const SpectralFunction& S_eta,
                                       double f, double spacing, int range = 400) {
  std::vector<Alias> out;
  for (int l = -range; l <= range; ++l) {
    const double g = f - l * spacing;
    const cplx h = H(g);
    const double n = S_eta(g).real();
    if (h != 0.0 || n != 0.0) out.push_back({l, h, n});
  }
  return out;
}

// Gains of a filter bank at one bin computed with Eigen's own eigensolver.
inline std::vector<double> bank_gains_reference(const SpectralFunction& H,
                                                const SpectralFunction& S_eta,
                                                const std::vector<SpectralFunction>& filters,
                                                double spacing, double f) {
  const std::vector<Alias> al = scan_aliases(H, S_eta, f, spacing);
  const Eigen::Index M = static_cast<Eigen::Index>(filters.size());
  const Eigen::Index K = static_cast<Eigen::Index>(al.size());
  Eigen::MatrixXcd Fs(M, K);
  Eigen::VectorXcd Fh(K);
  for (Eigen::Index v = 0; v < K; ++v) {
    const double g = f - al[v].l * spacing;
    const double sq = std::sqrt(al[v].noise);
    for (Eigen::Index i = 0; i < M; ++i) Fs(i, v) = filters[i](g) * sq;
    Fh(v) = sq > 0.0 ? al[v].h / sq : 0.0;
  }
  // Rows that see nothing are dropped.
  std::vector<Eigen::Index> keep;
  const double top = Fs.rowwise().squaredNorm().maxCoeff();
  for (Eigen::Index i = 0; i < M; ++i)
    if (Fs.row(i).squaredNorm() > 1e-12 * top) keep.push_back(i);
  std::vector<double> out(static_cast<std::size_t>(M), 0.0);
  if (keep.empty()) return out;
  Eigen::MatrixXcd F(static_cast<Eigen::Index>(keep.size()), K);
  for (std::size_t r = 0; r < keep.size(); ++r) F.row(static_cast<Eigen::Index>(r)) = Fs.row(keep[r]);
  const Eigen::MatrixXcd gram = F * F.adjoint();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> g(gram);
  const Eigen::MatrixXcd W = g.operatorInverseSqrt();
  const Eigen::VectorXcd d = Fh.cwiseAbs2().cast<cplx>();
  const Eigen::MatrixXcd A = W * F * d.asDiagonal() * F.adjoint() * W;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> e(0.5 * (A + A.adjoint()), Eigen::EigenvaluesOnly);
  const Eigen::VectorXd ev = e.eigenvalues();
  for (Eigen::Index i = 0; i < ev.size(); ++i) out[static_cast<std::size_t>(i)] = std::max(0.0, ev(ev.size() - 1 - i));
  return out;
}

// Capacity of a filter bank by direct water-filling over the reference gains.
inline double bank_capacity_reference(const SpectralFunction& H, const SpectralFunction& S_eta,
                                      const std::vector<SpectralFunction>& filters, double f_s,
                                      double P, double step) {
  const double spacing = f_s / static_cast<double>(filters.size());
  const int n = static_cast<int>(std::llround(spacing / step));
  const double lo = -0.5 * n * step;
  std::vector<double> gains;
  for (int j = 0; j < n; ++j) {
    const std::vector<double> g = bank_gains_reference(H, S_eta, filters, spacing, lo + (j + 0.5) * step);
    gains.insert(gains.end(), g.begin(), g.end());
  }
  return sorted_waterfill(gains, step, P).capacity;
}

// Water-filling over the `keep` best alias SNRs of every bin of the
// fundamental interval at `spacing`.
inline double selection_bound_reference(const SpectralFunction& H, const SpectralFunction& S_eta,
                                        double spacing, std::size_t keep, double P, double step) {
  const int n = static_cast<int>(std::llround(spacing / step));
  std::vector<double> gains;
  for (int j = 0; j < n; ++j) {
    std::vector<double> snr;
    for (const Alias& a : scan_aliases(H, S_eta, -0.5 * spacing + (j + 0.5) * step, spacing))
      snr.push_back(a.snr());
    std::sort(snr.begin(), snr.end(), std::greater<>());
    snr.resize(std::min(snr.size(), keep));
    gains.insert(gains.end(), snr.begin(), snr.end());
  }
  return sorted_waterfill(gains, step, P).capacity;
}

inline Eigen::MatrixXcd random_hermitian(Eigen::Index n, std::mt19937_64& rng) {
  std::normal_distribution<double> N(0.0, 1.0);
  Eigen::MatrixXcd A(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) A(i, j) = cplx(N(rng), N(rng));
  return 0.5 * (A + A.adjoint());
}

// Piecewise-constant spectrum with random values on [lo, lo + n*step).
inline SpectralFunction random_spectrum(double lo, double step, int n, std::mt19937_64& rng,
                                        sampcap::SpectrumKind kind, double zero_prob = 0.0,
                                        bool complex_values = false) {
  std::uniform_real_distribution<double> U(0.1, 2.0);
  std::uniform_real_distribution<double> ph(0.0, 2.0 * M_PI);
  std::bernoulli_distribution zero(zero_prob);
  std::vector<cplx> v(static_cast<std::size_t>(n));
  for (cplx& x : v) {
    if (zero(rng)) continue;
    x = U(rng);
    if (complex_values) x *= std::polar(1.0, ph(rng));
  }
  return SpectralFunction(lo, step, v, kind);
}

// Random channel and modulation bank over a fixed list of rate shapes.
struct RandomBankCase {
  sampcap::NamedChannel ch;
  sampcap::ModulationBank bank;
  double f_s;
};

inline RandomBankCase random_bank_case(std::mt19937_64& rng) {
  struct Shape {
    double f_q;
    int a, b, M;
  };
  static const Shape shapes[] = {{0.5, 1, 1, 1}, {0.5, 1, 2, 1}, {0.5, 3, 2, 1}, {0.5, 1, 2, 2},
                                 {0.5, 3, 2, 2}, {1.0, 1, 1, 1}, {1.0, 1, 1, 2}, {0.5, 2, 1, 1},
                                 {1.0, 1, 2, 3}, {1.0, 1, 4, 2}};
  const Shape s = shapes[rng() % std::size(shapes)];
  const double step = 0.125;
  RandomBankCase out;
  out.ch.H = random_spectrum(-1.0, step, 16, rng, sampcap::SpectrumKind::channel, 0.25, true);
  out.ch.S_eta = random_spectrum(-1.0, step, 16, rng, sampcap::SpectrumKind::noise_psd);
  out.bank.f_q = s.f_q;
  out.bank.a = s.a;
  out.bank.b = s.b;
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  for (int i = 0; i < s.M; ++i) {
    sampcap::ModulationBranch br;
    br.P = random_spectrum(-1.0, step, 16, rng, sampcap::SpectrumKind::premodulation, 0.1, true);
    br.S = random_spectrum(-2.0, step, 32, rng, sampcap::SpectrumKind::prefilter, 0.2, true);
    const int terms = 1 + static_cast<int>(rng() % 3);
    for (int t = 0; t < terms; ++t) br.coeffs[static_cast<int>(rng() % 5) - 2] = cplx(U(rng), U(rng));
    out.bank.branches.push_back(br);
  }
  out.f_s = s.a * s.M * s.f_q / s.b;
  return out;
}

}  // namespace support
