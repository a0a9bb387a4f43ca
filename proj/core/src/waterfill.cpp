#include "sampcap/waterfill.hpp"

#include <algorithm>
#include <cmath>

#include "sampcap/errors.hpp"

namespace sampcap {

double allocated_power(const ParallelChannelSet& channels, double nu) {
  double p = 0.0;
  for (double g : channels.gains)
    if (g > 0.0) p += std::max(nu - 1.0 / g, 0.0);
  return channels.weight * p;
}

double closed_form_level(const ParallelChannelSet& channels, double P, double nu_guess) {
  double inv_sum = 0.0;
  std::size_t active = 0;
  for (double g : channels.gains) {
    if (g > 0.0 && g * nu_guess > 1.0) {
      inv_sum += 1.0 / g;
      ++active;
    }
  }
  if (active == 0) return nu_guess;
  return (P / channels.weight + inv_sum) / static_cast<double>(active);
}

WaterfillSolution waterfill(const ParallelChannelSet& channels, double P) {
  if (!(P >= 0.0)) throw ConfigError("power must be nonnegative");
  if (!(channels.weight > 0.0)) throw ConfigError("channel weight must be positive");
  WaterfillSolution sol;
  sol.powers.assign(channels.gains.size(), 0.0);

  double g_max = 0.0;
  std::size_t positive = 0;
  for (double g : channels.gains) {
    if (g < 0.0 || !std::isfinite(g)) throw NumericError("gains must be finite and nonnegative");
    if (g > 0.0) {
      g_max = std::max(g_max, g);
      ++positive;
    }
  }
  if (P == 0.0) {
    sol.nu = positive ? 1.0 / g_max : 0.0;
    return sol;
  }
  if (positive == 0) throw NoUsableChannel("all channel gains are zero");

  // Pouring everything into the best entry already spends P, so the level
  // never exceeds 1/g_max + P/weight.
  double lo = 1.0 / g_max;
  double hi = lo + P / channels.weight;
  double nu = 0.5 * (lo + hi);
  for (int it = 0; it < 200; ++it) {
    nu = 0.5 * (lo + hi);
    sol.iterations = it + 1;
    const double p = allocated_power(channels, nu);
    if (std::abs(p - P) <= 1e-10 * P) break;
    (p > P ? hi : lo) = nu;
  }
  // Polish on the final active set.
  const double exact = closed_form_level(channels, P, nu);
  if (std::abs(allocated_power(channels, exact) - P) <= std::abs(allocated_power(channels, nu) - P))
    nu = exact;
  sol.nu = nu;

  double c = 0.0;
  for (std::size_t j = 0; j < channels.gains.size(); ++j) {
    const double g = channels.gains[j];
    if (g > 0.0 && nu * g > 1.0) {
      sol.powers[j] = nu - 1.0 / g;
      c += 0.5 * std::log(nu * g);
    }
  }
  sol.capacity = channels.weight * c;
  return sol;
}

WaterfillSolution nyquist_capacity(const SpectralFunction& H, const SpectralFunction& S_eta,
                                   double P) {
  if (H.empty() || H.max_abs() == 0.0) {
    WaterfillSolution zero;
    return zero;
  }
  const double step = common_step({H.bin_width(), S_eta.empty() ? 0.0 : S_eta.bin_width(),
                                   H.support_lo(), S_eta.empty() ? 0.0 : S_eta.support_lo()});
  const double lo = H.support_lo();
  const auto n = static_cast<std::size_t>(std::llround((H.support_hi() - lo) / step));
  ParallelChannelSet set{{}, step};
  set.gains.reserve(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double f = lo + (static_cast<double>(j) + 0.5) * step;
    const cplx h = H(f);
    const double noise = S_eta(f).real();
    if (h == 0.0) {
      set.gains.push_back(0.0);
      continue;
    }
    if (noise == 0.0) throw UnboundedSnr("noise PSD vanishes inside the channel support");
    set.gains.push_back(std::norm(h) / noise);
  }
  return waterfill(set, P);
}

}  // namespace sampcap
