#include "sampcap/capacity.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "sampcap/errors.hpp"
#include "sampcap/linalg.hpp"

namespace sampcap {

namespace {

std::vector<const SpectralFunction*> pointers(const SpectralFunction& H,
                                              const SpectralFunction& S_eta,
                                              const std::vector<SpectralFunction>& extra) {
  std::vector<const SpectralFunction*> out{&H, &S_eta};
  for (const SpectralFunction& s : extra) out.push_back(&s);
  return out;
}

std::vector<SpectralFunction> modbank_functions(const ModulationBank& bank) {
  std::vector<SpectralFunction> out;
  for (const ModulationBranch& br : bank.branches) {
    out.push_back(br.P);
    out.push_back(br.S);
  }
  return out;
}

SampledCapacity pooled(std::vector<double> gains, std::size_t per_bin, const FrequencyGrid& grid,
                       double P) {
  SampledCapacity out;
  out.grid = grid;
  out.per_bin = per_bin;
  out.solution = waterfill({gains, grid.width()}, P);
  out.gains = std::move(gains);
  return out;
}

}  // namespace

SymbolMatrices filterbank_symbols(const SpectralFunction& H, const SpectralFunction& S_eta,
                                  const std::vector<SpectralFunction>& filters, double f_s,
                                  double f) {
  if (filters.empty()) throw ConfigError("filter bank needs at least one branch");
  const auto M = static_cast<Eigen::Index>(filters.size());
  SymbolMatrices out;
  out.aliases = channel_aliases(H, S_eta, f, f_s / static_cast<double>(M));
  const auto K = static_cast<Eigen::Index>(out.aliases.size());
  out.F_s.resize(M, K);
  out.F_h.resize(K);
  for (Eigen::Index v = 0; v < K; ++v) {
    const AliasSample& a = out.aliases[static_cast<std::size_t>(v)];
    const double root = std::sqrt(a.noise);
    for (Eigen::Index i = 0; i < M; ++i) out.F_s(i, v) = filters[static_cast<std::size_t>(i)](a.f) * root;
    out.F_h(v) = a.h / root;
  }
  return out;
}

ModSymbolMatrices modbank_symbols(const SpectralFunction& H, const SpectralFunction& S_eta,
                                  const ModulationBank& bank, double f_s, double f,
                                  PhaseConvention phase) {
  const auto M = static_cast<Eigen::Index>(bank.branches.size());
  const double Ts = static_cast<double>(M) / f_s;
  const double sign = phase == PhaseConvention::delay ? 1.0 : -1.0;
  ModSymbolMatrices out;
  out.aliases = channel_aliases(H, S_eta, f, bank.f_q / bank.b);
  const auto K = static_cast<Eigen::Index>(out.aliases.size());
  out.F_eta = Eigen::MatrixXcd::Zero(bank.a * M, K);
  out.F_h.resize(K);
  for (Eigen::Index v = 0; v < K; ++v) {
    const AliasSample& a = out.aliases[static_cast<std::size_t>(v)];
    const double root = std::sqrt(a.noise);
    out.F_h(v) = a.h / root;
    for (Eigen::Index al = 0; al < M; ++al) {
      const ModulationBranch& br = bank.branches[static_cast<std::size_t>(al)];
      const cplx pre = br.P(a.f) * root;
      if (pre == 0.0) continue;
      for (int l = 1; l <= bank.a; ++l) {
        cplx acc = 0.0;
        for (const auto& [u, c] : br.coeffs) {
          const double shifted = a.f + u * bank.f_q;
          const cplx s = br.S(shifted);
          if (s == 0.0 || c == 0.0) continue;
          acc += c * s * std::polar(1.0, sign * 2.0 * std::numbers::pi * l * Ts * shifted);
        }
        out.F_eta(al * bank.a + (l - 1), v) = pre * acc;
      }
    }
  }
  return out;
}

Eigen::MatrixXcd whitened_rows(const Eigen::MatrixXcd& F) {
  const Eigen::VectorXd norms = F.rowwise().squaredNorm();
  const double top = norms.size() ? norms.maxCoeff() : 0.0;
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < F.rows(); ++i)
    if (norms(i) > kEpsInv * top) keep.push_back(i);
  Eigen::MatrixXcd R(static_cast<Eigen::Index>(keep.size()), F.cols());
  for (std::size_t i = 0; i < keep.size(); ++i) R.row(static_cast<Eigen::Index>(i)) = F.row(keep[i]);
  if (R.rows() == 0) return R;
  const Eigen::MatrixXcd gram = R * R.adjoint();
  return inv_sqrt_psd(gram) * R;
}

Eigen::VectorXd whitened_gains(const Eigen::MatrixXcd& F, const Eigen::VectorXcd& F_h) {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(F.rows());
  if (F.cols() == 0) return out;
  const Eigen::MatrixXcd W = whitened_rows(F);
  if (W.rows() == 0) return out;
  const Eigen::MatrixXcd A = W * F_h.asDiagonal();
  Eigen::MatrixXcd gram = A * A.adjoint();
  gram = 0.5 * (gram + gram.adjoint()).eval();
  const Eigen::VectorXd ev = hermitian_eigenvalues(gram);
  for (Eigen::Index i = 0; i < ev.size(); ++i) out(i) = std::max(ev(i), 0.0);
  return out;
}

void validate_modbank(const ModulationBank& bank, double f_s) {
  if (bank.branches.empty()) throw ConfigError("modulation bank needs at least one branch");
  if (bank.a < 1 || bank.b < 1) throw ConfigError("a and b must be positive integers");
  if (std::gcd(bank.a, bank.b) != 1) throw ConfigError("a and b must be coprime");
  if (!(bank.f_q > 0.0) || !(f_s > 0.0)) throw ConfigError("rates must be positive");
  const double lhs = bank.a * static_cast<double>(bank.branches.size()) / f_s;
  const double rhs = bank.b / bank.f_q;
  if (std::abs(lhs - rhs) > kLatticeTol * rhs)
    throw IncommensurateRates("a*M/f_s = " + std::to_string(lhs) + " but b/f_q = " +
                              std::to_string(rhs));
}

FrequencyGrid single_filter_grid(const SpectralFunction& H, const SpectralFunction& S_eta,
                                 const SpectralFunction& S, double f_s) {
  return fundamental_grid(f_s, lattice_step({&H, &S_eta, &S}, f_s));
}

FrequencyGrid filterbank_grid(const SpectralFunction& H, const SpectralFunction& S_eta,
                              const std::vector<SpectralFunction>& filters, double f_s) {
  if (filters.empty()) throw ConfigError("filter bank needs at least one branch");
  const double spacing = f_s / static_cast<double>(filters.size());
  return fundamental_grid(spacing, lattice_step(pointers(H, S_eta, filters), spacing));
}

FrequencyGrid modbank_grid(const SpectralFunction& H, const SpectralFunction& S_eta,
                           const ModulationBank& bank) {
  const double spacing = bank.f_q / bank.b;
  return fundamental_grid(spacing, lattice_step(pointers(H, S_eta, modbank_functions(bank)), spacing));
}

SampledCapacity capacity_single_filter(const SpectralFunction& H, const SpectralFunction& S_eta,
                                       const SpectralFunction& S, double f_s, double P,
                                       const FrequencyGrid& grid) {
  require_commensurate(grid, f_s, {&H, &S_eta, &S});
  std::vector<double> gains(grid.n_bins);
  for (std::size_t j = 0; j < grid.n_bins; ++j)
    gains[j] = folded_snr(H, S_eta, S, f_s, grid.center(j));
  return pooled(std::move(gains), 1, grid, P);
}

SampledCapacity capacity_single_filter(const SpectralFunction& H, const SpectralFunction& S_eta,
                                       const SpectralFunction& S, double f_s, double P) {
  return capacity_single_filter(H, S_eta, S, f_s, P, single_filter_grid(H, S_eta, S, f_s));
}

SampledCapacity capacity_filterbank(const SpectralFunction& H, const SpectralFunction& S_eta,
                                    const std::vector<SpectralFunction>& filters, double f_s,
                                    double P, const FrequencyGrid& grid) {
  if (filters.empty()) throw ConfigError("filter bank needs at least one branch");
  const std::size_t M = filters.size();
  require_commensurate(grid, f_s / static_cast<double>(M), pointers(H, S_eta, filters));
  std::vector<double> gains(grid.n_bins * M, 0.0);
  for (std::size_t j = 0; j < grid.n_bins; ++j) {
    const SymbolMatrices sym = filterbank_symbols(H, S_eta, filters, f_s, grid.center(j));
    const Eigen::VectorXd ev = whitened_gains(sym.F_s, sym.F_h);
    for (std::size_t k = 0; k < M; ++k) gains[j * M + k] = ev(static_cast<Eigen::Index>(k));
  }
  return pooled(std::move(gains), M, grid, P);
}

SampledCapacity capacity_filterbank(const SpectralFunction& H, const SpectralFunction& S_eta,
                                    const std::vector<SpectralFunction>& filters, double f_s,
                                    double P) {
  return capacity_filterbank(H, S_eta, filters, f_s, P, filterbank_grid(H, S_eta, filters, f_s));
}

SampledCapacity capacity_modbank(const SpectralFunction& H, const SpectralFunction& S_eta,
                                 const ModulationBank& bank, double f_s, double P,
                                 const FrequencyGrid& grid, PhaseConvention phase) {
  validate_modbank(bank, f_s);
  const std::vector<SpectralFunction> fns = modbank_functions(bank);
  require_commensurate(grid, bank.f_q / bank.b, pointers(H, S_eta, fns));
  const std::size_t rows = static_cast<std::size_t>(bank.a) * bank.branches.size();
  std::vector<double> gains(grid.n_bins * rows, 0.0);
  for (std::size_t j = 0; j < grid.n_bins; ++j) {
    const ModSymbolMatrices sym = modbank_symbols(H, S_eta, bank, f_s, grid.center(j), phase);
    const Eigen::VectorXd ev = whitened_gains(sym.F_eta, sym.F_h);
    for (std::size_t k = 0; k < rows; ++k) gains[j * rows + k] = ev(static_cast<Eigen::Index>(k));
  }
  return pooled(std::move(gains), rows, grid, P);
}

SampledCapacity capacity_modbank(const SpectralFunction& H, const SpectralFunction& S_eta,
                                 const ModulationBank& bank, double f_s, double P,
                                 PhaseConvention phase) {
  validate_modbank(bank, f_s);
  return capacity_modbank(H, S_eta, bank, f_s, P, modbank_grid(H, S_eta, bank), phase);
}

SampledCapacity sampled_capacity(const SpectralFunction& H, const SpectralFunction& S_eta,
                                 const SamplerSpec& sampler, double f_s, double P) {
  return std::visit(
      [&](const auto& s) -> SampledCapacity {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, SingleFilter>)
          return capacity_single_filter(H, S_eta, s.S, f_s, P);
        else if constexpr (std::is_same_v<T, FilterBank>)
          return capacity_filterbank(H, S_eta, s.filters, f_s, P);
        else
          return capacity_modbank(H, S_eta, s, f_s, P);
      },
      sampler);
}

}  // namespace sampcap
