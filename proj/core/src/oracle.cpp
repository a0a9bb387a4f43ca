#include "sampcap/oracle.hpp"

#include <cmath>
#include <functional>
#include <numbers>
#include <random>

#include "sampcap/errors.hpp"
#include "sampcap/linalg.hpp"

namespace sampcap {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double sinc(double x) {
  if (x == 0.0) return 1.0;
  const double px = std::numbers::pi * x;
  return std::sin(px) / px;
}

// Piecewise-constant spectrum as (bin centre, value) pairs on a fixed step.
struct Tabulated {
  double step = 1.0;
  std::vector<std::pair<double, cplx>> bins;

  cplx transform(double t) const {
    cplx acc = 0.0;
    for (const auto& [c, v] : bins) acc += v * std::polar(1.0, kTwoPi * c * t);
    return acc * step * sinc(step * t);
  }
};

Tabulated tabulate(Interval span, double step, const std::function<cplx(double)>& fn) {
  Tabulated out;
  out.step = step;
  if (span.empty()) return out;
  const auto n = std::llround((span.hi - span.lo) / step);
  for (long long j = 0; j < n; ++j) {
    const double c = span.lo + (static_cast<double>(j) + 0.5) * step;
    const cplx v = fn(c);
    if (v != 0.0) out.bins.emplace_back(c, v);
  }
  return out;
}

Interval hull(const SpectralFunction& a, const SpectralFunction& b) {
  if (a.empty()) return b.support();
  if (b.empty()) return a.support();
  return {std::min(a.support_lo(), b.support_lo()), std::max(a.support_hi(), b.support_hi())};
}

void check_sizes(int n, int k) {
  if (n < 1 || k < 1) throw ConfigError("oracle needs n >= 1 and k >= 1");
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

cplx complex_normal(std::mt19937_64& rng) {
  std::normal_distribution<double> d(0.0, std::sqrt(0.5));
  const double re = d(rng);
  return {re, d(rng)};
}

}  // namespace

cplx inverse_transform(const SpectralFunction& fn, double t) {
  if (fn.empty()) return 0.0;
  return tabulate(fn.support(), fn.bin_width(), [&](double f) { return fn(f); }).transform(t);
}

DiscreteModel discretize_taps(const std::vector<cplx>& h, const std::vector<std::vector<cplx>>& s,
                              int n, int k, double delta, int input_offset) {
  check_sizes(n, k);
  if (s.empty()) throw ConfigError("need at least one branch filter");
  if (!(delta > 0.0)) throw ConfigError("delta must be positive");
  DiscreteModel m;
  m.n = n;
  m.k = k;
  m.M = static_cast<int>(s.size());
  m.delta = delta;
  m.Ts = k * delta;

  std::size_t s_len = 1;
  for (const auto& taps : s) s_len = std::max(s_len, taps.size());
  const long long w_min = -static_cast<long long>(s_len) + 1;
  const long long w_max = static_cast<long long>(n - 1) * k;

  m.H_tilde = Eigen::MatrixXcd::Zero(n * m.M, n * k);
  m.S_mat = Eigen::MatrixXcd::Zero(n * m.M, w_max - w_min + 1);
  for (int b = 0; b < m.M; ++b) {
    const std::vector<cplx>& sb = s[static_cast<std::size_t>(b)];
    std::vector<cplx> hs(h.size() + sb.size() > 0 ? h.size() + sb.size() - 1 : 0, 0.0);
    for (std::size_t x = 0; x < h.size(); ++x)
      for (std::size_t y = 0; y < sb.size(); ++y) hs[x + y] += h[x] * sb[y];
    for (int i = 0; i < n; ++i) {
      const long long row = static_cast<long long>(i) * m.M + b;
      for (int v = 0; v < n * k; ++v) {
        const long long lag = static_cast<long long>(i) * k - (v + input_offset);
        if (lag >= 0 && lag < static_cast<long long>(hs.size())) m.H_tilde(row, v) = hs[static_cast<std::size_t>(lag)];
      }
      for (long long w = w_min; w <= w_max; ++w) {
        const long long lag = static_cast<long long>(i) * k - w;
        if (lag >= 0 && lag < static_cast<long long>(sb.size()))
          m.S_mat(row, w - w_min) = sb[static_cast<std::size_t>(lag)];
      }
    }
  }
  m.noise_cov = (m.S_mat * m.S_mat.adjoint()) / delta;
  return m;
}

DiscreteModel discretize(const SpectralFunction& H, const SpectralFunction& S_eta,
                         const std::vector<SpectralFunction>& filters, double f_s, int n, int k) {
  check_sizes(n, k);
  if (filters.empty()) throw ConfigError("need at least one branch filter");
  DiscreteModel m;
  m.n = n;
  m.k = k;
  m.M = static_cast<int>(filters.size());
  m.Ts = m.M / f_s;
  m.delta = m.Ts / k;

  std::vector<const SpectralFunction*> fns{&H, &S_eta};
  for (const SpectralFunction& s : filters) fns.push_back(&s);
  const double step = lattice_step(fns, f_s / m.M);
  const Interval span = hull(H, S_eta);
  const int M = m.M;

  m.H_tilde.resize(n * M, n * k);
  for (int b = 0; b < M; ++b) {
    const SpectralFunction& S = filters[static_cast<std::size_t>(b)];
    const Tabulated g = tabulate(span, step, [&](double f) { return H(f) * S(f); });
    // Entry depends on the lag i k - v only.
    const long long lag_min = -static_cast<long long>(n) * k + 1;
    std::vector<cplx> lags(static_cast<std::size_t>(static_cast<long long>(n) * k + (n - 1) * k));
    for (std::size_t x = 0; x < lags.size(); ++x)
      lags[x] = m.delta * g.transform((lag_min + static_cast<long long>(x)) * m.delta);
    for (int i = 0; i < n; ++i)
      for (int v = 0; v < n * k; ++v)
        m.H_tilde(i * M + b, v) = lags[static_cast<std::size_t>(static_cast<long long>(i) * k - v - lag_min)];
  }

  m.noise_cov.resize(n * M, n * M);
  for (int b = 0; b < M; ++b) {
    for (int c = 0; c < M; ++c) {
      const SpectralFunction& Sb = filters[static_cast<std::size_t>(b)];
      const SpectralFunction& Sc = filters[static_cast<std::size_t>(c)];
      const Tabulated r = tabulate(S_eta.support(), step, [&](double f) {
        return Sb(f) * std::conj(Sc(f)) * S_eta(f).real();
      });
      std::vector<cplx> lags(static_cast<std::size_t>(2 * n - 1));
      for (int d = -(n - 1); d <= n - 1; ++d) lags[static_cast<std::size_t>(d + n - 1)] = r.transform(d * m.Ts);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m.noise_cov(i * M + b, j * M + c) = lags[static_cast<std::size_t>(i - j + n - 1)];
    }
  }
  return m;
}

DiscreteModel discretize_modbank(const SpectralFunction& H, const SpectralFunction& S_eta,
                                 const ModulationBank& bank, double f_s, int n, int k) {
  check_sizes(n, k);
  validate_modbank(bank, f_s);
  DiscreteModel m;
  m.n = n;
  m.k = k;
  m.M = static_cast<int>(bank.branches.size());
  m.Ts = m.M / f_s;
  m.delta = m.Ts / k;
  const int M = m.M;

  std::vector<const SpectralFunction*> fns{&H, &S_eta};
  for (const ModulationBranch& br : bank.branches) {
    fns.push_back(&br.P);
    fns.push_back(&br.S);
  }
  const double step = lattice_step(fns, bank.f_q / bank.b);
  const Interval span = hull(H, S_eta);

  m.H_tilde = Eigen::MatrixXcd::Zero(n * M, n * k);
  for (int b = 0; b < M; ++b) {
    const ModulationBranch& br = bank.branches[static_cast<std::size_t>(b)];
    for (const auto& [u, c] : br.coeffs) {
      if (c == 0.0) continue;
      const double shift = u * bank.f_q;
      const Tabulated g = tabulate(span, step, [&](double f) { return br.S(f + shift) * br.P(f) * H(f); });
      if (g.bins.empty()) continue;
      for (int i = 0; i < n; ++i) {
        const double t = i * m.Ts;
        const cplx phase = c * std::polar(1.0, kTwoPi * shift * t);
        for (int v = 0; v < n * k; ++v)
          m.H_tilde(i * M + b, v) += m.delta * phase * g.transform(t - v * m.delta);
      }
    }
  }

  m.noise_cov = Eigen::MatrixXcd::Zero(n * M, n * M);
  for (int b = 0; b < M; ++b) {
    for (int c = 0; c < M; ++c) {
      const ModulationBranch& x = bank.branches[static_cast<std::size_t>(b)];
      const ModulationBranch& y = bank.branches[static_cast<std::size_t>(c)];
      for (const auto& [u, cu] : x.coeffs) {
        for (const auto& [w, cw] : y.coeffs) {
          const double su = u * bank.f_q;
          const double sw = w * bank.f_q;
          const Tabulated r = tabulate(S_eta.support(), step, [&](double f) {
            return x.S(f + su) * x.P(f) * std::conj(y.S(f + sw) * y.P(f)) * S_eta(f).real();
          });
          if (r.bins.empty()) continue;
          std::vector<cplx> lags(static_cast<std::size_t>(2 * n - 1));
          for (int d = -(n - 1); d <= n - 1; ++d) lags[static_cast<std::size_t>(d + n - 1)] = r.transform(d * m.Ts);
          for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
              m.noise_cov(i * M + b, j * M + c) +=
                  cu * std::conj(cw) * std::polar(1.0, kTwoPi * (su * i - sw * j) * m.Ts) *
                  lags[static_cast<std::size_t>(i - j + n - 1)];
        }
      }
    }
  }
  return m;
}

Eigen::MatrixXcd whitening(const DiscreteModel& model) {
  Eigen::MatrixXcd cov = 0.5 * (model.noise_cov + model.noise_cov.adjoint());
  return inv_sqrt_psd(cov);
}

double finite_capacity(const DiscreteModel& model, double P) {
  if (model.H_tilde.size() == 0 || model.H_tilde.cwiseAbs().maxCoeff() == 0.0) return 0.0;
  const Eigen::MatrixXcd A = whitening(model) * model.H_tilde;
  Eigen::MatrixXcd gram = A * A.adjoint();
  gram = 0.5 * (gram + gram.adjoint()).eval();
  const Eigen::VectorXd ev = hermitian_eigenvalues(gram);
  ParallelChannelSet set{{}, 1.0 / (static_cast<double>(model.n) * model.k)};
  for (Eigen::Index i = 0; i < ev.size(); ++i) set.gains.push_back(std::max(ev(i), 0.0));
  return waterfill(set, P).capacity / model.delta;
}

Eigen::MatrixXcd draw_noise(const DiscreteModel& model, int trials, std::uint64_t seed) {
  const Eigen::MatrixXcd cov = 0.5 * (model.noise_cov + model.noise_cov.adjoint());
  const Eigen::LLT<Eigen::MatrixXcd> llt(cov);
  if (llt.info() != Eigen::Success) throw SingularWhitening("noise covariance is not positive definite");
  const Eigen::MatrixXcd L = llt.matrixL();
  Eigen::MatrixXcd out(cov.rows(), trials);
  for (int t = 0; t < trials; ++t) {
    std::mt19937_64 rng(splitmix64(seed + static_cast<std::uint64_t>(t)));
    Eigen::VectorXcd z(cov.rows());
    for (Eigen::Index i = 0; i < z.size(); ++i) z(i) = complex_normal(rng);
    out.col(t) = L * z;
  }
  return out;
}

OrthogonalityStats mc_orthogonality(const DiscreteModel& model, double input_var, int trials,
                                    std::uint64_t seed, double estimator_scale) {
  if (trials < 1) throw ConfigError("trials must be >= 1");
  if (input_var < 0.0) throw ConfigError("input variance must be nonnegative");
  const Eigen::Index nx = model.H_tilde.cols();
  const Eigen::Index ny = model.H_tilde.rows();
  const Eigen::MatrixXcd& Hm = model.H_tilde;
  const Eigen::MatrixXcd cov_y = input_var * Hm * Hm.adjoint() + model.noise_cov;
  Eigen::MatrixXcd est = Eigen::MatrixXcd::Zero(nx, ny);
  if (input_var > 0.0) {
    const Eigen::LDLT<Eigen::MatrixXcd> ldlt(0.5 * (cov_y + cov_y.adjoint()));
    est = estimator_scale * input_var *
          ldlt.solve(Hm).adjoint();  // Cx H* Cy^{-1}, Cy Hermitian
  }
  const Eigen::MatrixXcd noise = draw_noise(model, trials, seed ^ 0x5eed5eed5eedULL);

  Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(nx, ny);
  const double sx = std::sqrt(input_var);
  for (int t = 0; t < trials; ++t) {
    Eigen::VectorXcd x = Eigen::VectorXcd::Zero(nx);
    if (input_var > 0.0) {
      std::mt19937_64 rng(splitmix64(seed + 0x9e37ULL * (static_cast<std::uint64_t>(t) + 1)));
      for (Eigen::Index i = 0; i < nx; ++i) x(i) = sx * complex_normal(rng);
    }
    const Eigen::VectorXcd y = Hm * x + noise.col(t);
    const Eigen::VectorXcd err = x - est * y;
    acc += err * y.adjoint();
  }
  acc /= static_cast<double>(trials);

  OrthogonalityStats out;
  out.trials = trials;
  if (input_var == 0.0) {
    out.max_residual = acc.cwiseAbs().maxCoeff();
    return out;
  }
  for (Eigen::Index r = 0; r < ny; ++r) {
    const double norm = std::sqrt(input_var * cov_y(r, r).real());
    for (Eigen::Index v = 0; v < nx; ++v)
      out.max_residual = std::max(out.max_residual, std::abs(acc(v, r)) / norm);
  }
  return out;
}

}  // namespace sampcap
