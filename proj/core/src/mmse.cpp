#include "sampcap/mmse.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sampcap/errors.hpp"
#include "sampcap/linalg.hpp"

namespace sampcap {

std::vector<SignalAlias> signal_aliases(const SpectralFunction& H, const SpectralFunction& S_eta,
                                        const SpectralFunction& S_X, double base_f,
                                        double spacing) {
  const AliasedSet set =
      aliased_set(base_f, spacing, {H.support(), S_eta.support(), S_X.support()});
  std::vector<SignalAlias> out;
  for (int l : set.indices) {
    const double f = set.frequency(l);
    const cplx h = H(f);
    const double n = S_eta(f).real();
    const double x = S_X(f).real();
    if (n == 0.0 && h != 0.0)
      throw UnboundedSnr("noise PSD vanishes where the channel is nonzero at f = " +
                         std::to_string(f));
    if (n == 0.0 && x == 0.0) continue;
    out.push_back({l, f, h, n, x});
  }
  return out;
}

WienerSolution wiener_filter(const SpectralFunction& H, const SpectralFunction& S_eta,
                             const std::vector<SpectralFunction>& filters,
                             const SpectralFunction& S_X, double f_s, const FrequencyGrid& grid) {
  if (filters.empty()) throw ConfigError("filter bank needs at least one branch");
  const auto M = static_cast<Eigen::Index>(filters.size());
  const double spacing = f_s / static_cast<double>(M);
  std::vector<const SpectralFunction*> fns{&H, &S_eta, &S_X};
  for (const SpectralFunction& s : filters) fns.push_back(&s);
  require_commensurate(grid, spacing, fns);

  WienerSolution out;
  out.grid = grid;
  out.spacing = spacing;
  out.bins.resize(grid.n_bins);
  const double w = grid.width();
  for (std::size_t j = 0; j < grid.n_bins; ++j) {
    WienerBin& bin = out.bins[j];
    bin.aliases = signal_aliases(H, S_eta, S_X, grid.center(j), spacing);
    const auto K = static_cast<Eigen::Index>(bin.aliases.size());
    Eigen::MatrixXcd A(M, K);
    for (Eigen::Index v = 0; v < K; ++v)
      for (Eigen::Index i = 0; i < M; ++i)
        A(i, v) = filters[static_cast<std::size_t>(i)](bin.aliases[static_cast<std::size_t>(v)].f);

    bin.K = Eigen::MatrixXcd::Zero(M, M);
    for (Eigen::Index v = 0; v < K; ++v) {
      const SignalAlias& a = bin.aliases[static_cast<std::size_t>(v)];
      bin.K += (std::norm(a.h) * a.input + a.noise) * A.col(v) * A.col(v).adjoint();
      bin.input_power += a.input;
    }
    if (!bin.K.allFinite()) throw SingularK("sample covariance is not finite");
    const Eigen::MatrixXcd Kinv = pinv_psd(bin.K);

    bin.G.resize(K, M);
    for (Eigen::Index v = 0; v < K; ++v) {
      const SignalAlias& a = bin.aliases[static_cast<std::size_t>(v)];
      bin.G.row(v) = std::conj(a.h) * a.input * A.col(v).adjoint() * Kinv;
    }
    for (Eigen::Index v = 0; v < K; ++v) {
      const SignalAlias& a = bin.aliases[static_cast<std::size_t>(v)];
      const double q = (A.col(v).adjoint() * Kinv * A.col(v)).value().real();
      bin.explained += a.input * a.input * std::norm(a.h) * q;
    }
    out.signal_power += w * bin.input_power;
    out.mse += w * (bin.input_power - bin.explained);
  }
  out.mse = std::max(out.mse, 0.0);
  return out;
}

WienerSolution wiener_filter(const SpectralFunction& H, const SpectralFunction& S_eta,
                             const std::vector<SpectralFunction>& filters,
                             const SpectralFunction& S_X, double f_s) {
  if (filters.empty()) throw ConfigError("filter bank needs at least one branch");
  const double spacing = f_s / static_cast<double>(filters.size());
  std::vector<const SpectralFunction*> fns{&H, &S_eta, &S_X};
  for (const SpectralFunction& s : filters) fns.push_back(&s);
  return wiener_filter(H, S_eta, filters, S_X, f_s,
                       fundamental_grid(spacing, lattice_step(fns, spacing)));
}

MmseDesign mmse_optimal_bank(const SpectralFunction& H, const SpectralFunction& S_eta,
                             const SpectralFunction& S_X, double f_s, int M,
                             const FrequencyGrid& grid) {
  if (M < 1) throw ConfigError("need at least one branch");
  const double spacing = f_s / M;
  require_commensurate(grid, spacing, {&H, &S_eta, &S_X});
  MmseDesign out;
  out.branches.assign(static_cast<std::size_t>(M), SelectionFilter{grid, spacing, {}});
  for (SelectionFilter& b : out.branches) b.chosen.assign(grid.n_bins, std::nullopt);

  for (std::size_t j = 0; j < grid.n_bins; ++j) {
    std::vector<SignalAlias> aliases = signal_aliases(H, S_eta, S_X, grid.center(j), spacing);
    std::sort(aliases.begin(), aliases.end(), [](const SignalAlias& x, const SignalAlias& y) {
      if (x.explained() != y.explained()) return x.explained() > y.explained();
      return ranks_before(x.snr(), x.l, y.snr(), y.l);
    });
    double bin = 0.0;
    for (const SignalAlias& a : aliases) bin += a.input;
    for (std::size_t k = 0; k < aliases.size() && k < static_cast<std::size_t>(M); ++k) {
      out.branches[k].chosen[j] = aliases[k].l;
      bin -= aliases[k].explained();
    }
    out.predicted_mse += grid.width() * bin;
  }

  std::vector<SpectralFunction> filters;
  for (const SelectionFilter& b : out.branches) filters.push_back(b.realize());
  out.wiener = wiener_filter(H, S_eta, filters, S_X, f_s, grid);
  return out;
}

MmseDesign mmse_optimal_bank(const SpectralFunction& H, const SpectralFunction& S_eta,
                             const SpectralFunction& S_X, double f_s, int M) {
  if (M < 1) throw ConfigError("need at least one branch");
  const double spacing = f_s / M;
  return mmse_optimal_bank(H, S_eta, S_X, f_s, M,
                           fundamental_grid(spacing, lattice_step({&H, &S_eta, &S_X}, spacing)));
}

SpectralFunction waterfilling_input_psd(const SpectralFunction& H, const SpectralFunction& S_eta,
                                        double f_s, int M, double P) {
  const FilterDesign design = optimal_filterbank(H, S_eta, f_s, M, P);
  const FrequencyGrid& grid = design.capacity.grid;
  const double w = grid.width();
  const double nu = design.capacity.solution.nu;
  std::vector<Band> bands;
  for (std::size_t k = 0; k < design.branches.size(); ++k) {
    const SelectionFilter& br = design.branches[k];
    for (std::size_t j = 0; j < grid.n_bins; ++j) {
      const double g = design.capacity.gain(j, k);
      if (!br.chosen[j] || g <= 0.0 || nu * g <= 1.0) continue;
      const double lo = grid.f_lo + static_cast<double>(j) * w - *br.chosen[j] * br.spacing;
      bands.push_back({lo, lo + w, nu - 1.0 / g});
    }
  }
  return SpectralFunction::from_bands(bands, w, SpectrumKind::input_psd);
}

}  // namespace sampcap
