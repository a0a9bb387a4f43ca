#include "sampcap/design.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numeric>

#include "sampcap/errors.hpp"

namespace sampcap {

namespace {

SampledCapacity waterfill_bins(std::vector<double> gains, std::size_t per_bin,
                               const FrequencyGrid& grid, double P) {
  SampledCapacity out;
  out.grid = grid;
  out.per_bin = per_bin;
  out.solution = waterfill({gains, grid.width()}, P);
  out.gains = std::move(gains);
  return out;
}

// Top `count` SNRs per bin at `spacing`; optionally records the winners.
SampledCapacity top_gains(const SpectralFunction& H, const SpectralFunction& S_eta,
                          double spacing, std::size_t count, double P, const FrequencyGrid& grid,
                          std::vector<SelectionFilter>* branches) {
  require_commensurate(grid, spacing, {&H, &S_eta});
  if (branches) {
    branches->assign(count, SelectionFilter{grid, spacing, {}});
    for (SelectionFilter& b : *branches) b.chosen.assign(grid.n_bins, std::nullopt);
  }
  std::vector<double> gains(grid.n_bins * count, 0.0);
  for (std::size_t j = 0; j < grid.n_bins; ++j) {
    const std::vector<AliasSample> ranked = ranked_aliases(H, S_eta, grid.center(j), spacing);
    for (std::size_t k = 0; k < count && k < ranked.size(); ++k) {
      gains[j * count + k] = ranked[k].snr();
      if (branches) (*branches)[k].chosen[j] = ranked[k].l;
    }
  }
  return waterfill_bins(std::move(gains), count, grid, P);
}

}  // namespace

SpectralFunction SelectionFilter::realize() const {
  const double w = grid.width();
  std::vector<Band> bands;
  for (std::size_t j = 0; j < chosen.size(); ++j) {
    if (!chosen[j]) continue;
    const double lo = grid.f_lo + static_cast<double>(j) * w - *chosen[j] * spacing;
    bands.push_back({lo, lo + w, 1.0});
  }
  return SpectralFunction::from_bands(bands, w, SpectrumKind::prefilter);
}

std::vector<SpectralFunction> FilterDesign::filters() const {
  std::vector<SpectralFunction> out;
  for (const SelectionFilter& b : branches) out.push_back(b.realize());
  return out;
}

bool ranks_before(double snr_x, int l_x, double snr_y, int l_y) {
  if (snr_x != snr_y) return snr_x > snr_y;
  if (std::abs(l_x) != std::abs(l_y)) return std::abs(l_x) < std::abs(l_y);
  return l_x < l_y;
}

std::vector<AliasSample> ranked_aliases(const SpectralFunction& H, const SpectralFunction& S_eta,
                                        double base_f, double spacing) {
  std::vector<AliasSample> out = channel_aliases(H, S_eta, base_f, spacing);
  std::sort(out.begin(), out.end(), [](const AliasSample& x, const AliasSample& y) {
    return ranks_before(x.snr(), x.l, y.snr(), y.l);
  });
  return out;
}

FrequencyGrid optimal_grid(const SpectralFunction& H, const SpectralFunction& S_eta, double f_s,
                           int M) {
  if (M < 1) throw ConfigError("need at least one branch");
  const double spacing = f_s / M;
  return fundamental_grid(spacing, lattice_step({&H, &S_eta}, spacing));
}

FilterDesign optimal_prefilter(const SpectralFunction& H, const SpectralFunction& S_eta,
                               double f_s, double P, const FrequencyGrid& grid) {
  return optimal_filterbank(H, S_eta, f_s, 1, P, grid);
}

FilterDesign optimal_prefilter(const SpectralFunction& H, const SpectralFunction& S_eta,
                               double f_s, double P) {
  return optimal_filterbank(H, S_eta, f_s, 1, P);
}

FilterDesign optimal_filterbank(const SpectralFunction& H, const SpectralFunction& S_eta,
                                double f_s, int M, double P, const FrequencyGrid& grid) {
  if (M < 1) throw ConfigError("need at least one branch");
  FilterDesign out;
  out.capacity = top_gains(H, S_eta, f_s / M, static_cast<std::size_t>(M), P, grid, &out.branches);
  return out;
}

FilterDesign optimal_filterbank(const SpectralFunction& H, const SpectralFunction& S_eta,
                                double f_s, int M, double P) {
  return optimal_filterbank(H, S_eta, f_s, M, P, optimal_grid(H, S_eta, f_s, M));
}

SampledCapacity modbank_upper_bound(const SpectralFunction& H, const SpectralFunction& S_eta,
                                    const ModulationBank& bank, double P,
                                    const FrequencyGrid& grid) {
  if (bank.branches.empty() || bank.a < 1 || bank.b < 1)
    throw ConfigError("invalid modulation bank");
  const std::size_t count = static_cast<std::size_t>(bank.a) * bank.branches.size();
  return top_gains(H, S_eta, bank.f_q / bank.b, count, P, grid, nullptr);
}

SampledCapacity modbank_upper_bound(const SpectralFunction& H, const SpectralFunction& S_eta,
                                    const ModulationBank& bank, double P) {
  const double spacing = bank.f_q / bank.b;
  return modbank_upper_bound(H, S_eta, bank, P,
                             fundamental_grid(spacing, lattice_step({&H, &S_eta}, spacing)));
}

LandauWitness landau_check(const SpectralFunction& H, const SpectralFunction& S_eta, double f_s,
                           int M) {
  LandauWitness out;
  out.grid = optimal_grid(H, S_eta, f_s, M);
  for (const cplx& v : H.values())
    if (v != 0.0) out.landau_rate += H.bin_width();
  out.active.resize(out.grid.n_bins);
  for (std::size_t j = 0; j < out.grid.n_bins; ++j) {
    for (const AliasSample& a : ranked_aliases(H, S_eta, out.grid.center(j), f_s / M))
      if (a.h != 0.0) out.active[j].push_back(a.l);
    out.max_active = std::max(out.max_active, out.active[j].size());
  }
  out.achievable = out.max_active <= static_cast<std::size_t>(M);
  return out;
}

ModulationBank ModulationDesign::bank() const {
  const Interval span = layout.span();
  ModulationBranch branch{
      SpectralFunction::constant(span.lo, span.hi, 1.0, SpectrumKind::premodulation), coeffs,
      passband};
  return ModulationBank{{branch}, layout.f_q, K, 1};
}

ModulationDesign subband_modulation_design(const SpectralFunction& H,
                                           const SpectralFunction& S_eta,
                                           const SubbandLayout& layout, int K) {
  if (!(layout.f_q > 0.0) || layout.L < 1) throw InvalidChannelShape("invalid subband layout");
  if (K < 1 || K > 2 * layout.L) throw InvalidChannelShape("K must lie in [1, 2L]");

  const Interval span = layout.span();
  const double step = common_step({layout.f_q, layout.origin, H.empty() ? 0.0 : H.bin_width(),
                                   H.empty() ? 0.0 : H.support_lo(),
                                   S_eta.empty() ? 0.0 : S_eta.bin_width(),
                                   S_eta.empty() ? 0.0 : S_eta.support_lo()});
  for (const SpectralFunction* fn : {&H, &S_eta}) {
    if (fn->empty()) continue;
    const auto n = std::llround((fn->support_hi() - fn->support_lo()) / step);
    for (long long j = 0; j < n; ++j) {
      const double f = fn->support_lo() + (static_cast<double>(j) + 0.5) * step;
      if ((*fn)(f) != 0.0 && !span.contains(f))
        throw InvalidChannelShape("channel extends beyond the 2L subbands");
    }
  }

  ModulationDesign out;
  out.layout = layout;
  out.K = K;
  const auto per_band = static_cast<std::size_t>(std::llround(layout.f_q / step));
  for (int j = -layout.L; j < layout.L; ++j) {
    const Interval band = layout.subband(j);
    double snr = 0.0;
    for (std::size_t m = 0; m < per_band; ++m) {
      const double f = band.lo + (static_cast<double>(m) + 0.5) * step;
      const cplx h = H(f);
      const double n = S_eta(f).real();
      double s = 0.0;
      if (n == 0.0) {
        if (h != 0.0) throw InvalidChannelShape("noise vanishes inside a subband");
      } else {
        s = std::norm(h) / n;
      }
      if (m == 0)
        snr = s;
      else if (std::abs(s - snr) > 1e-12 * std::max(1.0, snr))
        throw InvalidChannelShape("SNR is not flat within subband " + std::to_string(j));
    }
    out.subband_snr.push_back(snr);
  }

  std::vector<int> order(out.subband_snr.size());
  std::iota(order.begin(), order.end(), -layout.L);
  std::stable_sort(order.begin(), order.end(), [&](int x, int y) {
    return ranks_before(out.subband_snr[x + layout.L], x, out.subband_snr[y + layout.L], y);
  });
  out.selected.assign(order.begin(), order.begin() + K);
  std::sort(out.selected.begin(), out.selected.end(), std::greater<>());

  out.L_star = 2 * layout.L;
  while (out.L_star % K != 0) ++out.L_star;

  std::vector<Band> bands;
  for (int i = 1; i <= K; ++i) {
    const int target = i * out.L_star + i;
    out.coeffs[target - out.selected[static_cast<std::size_t>(i - 1)]] = 1.0;
    const Interval band = layout.subband(target);
    bands.push_back({band.lo, band.hi, 1.0});
  }
  out.passband = SpectralFunction::from_bands(bands, layout.f_q, SpectrumKind::prefilter);
  return out;
}

}  // namespace sampcap
