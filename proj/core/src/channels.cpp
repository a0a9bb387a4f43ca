#include "sampcap/channels.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "sampcap/errors.hpp"

namespace sampcap {

namespace {

double nyquist_rate(const SpectralFunction& H) {
  double edge = 0.0;
  for (const Band& b : H.bands()) edge = std::max({edge, std::abs(b.lo), std::abs(b.hi)});
  return 2.0 * edge;
}

}  // namespace

NamedChannel flat_channel(double B) {
  if (!(B > 0.0)) throw InvalidSpectrum("flat channel needs B > 0");
  NamedChannel c;
  c.name = "flat";
  c.H = SpectralFunction::constant(-B, B, 1.0, SpectrumKind::channel);
  c.S_eta = SpectralFunction::constant(-B, B, 1.0, SpectrumKind::noise_psd);
  c.f_nyq = nyquist_rate(c.H);
  return c;
}

NamedChannel wide_noise_channel(double B, double noise_bw) {
  if (!(B > 0.0) || noise_bw < B) throw InvalidSpectrum("wide-noise channel needs noise_bw >= B > 0");
  NamedChannel c;
  c.name = "wide_noise";
  c.H = SpectralFunction::constant(-B, B, 1.0, SpectrumKind::channel);
  c.S_eta = SpectralFunction::constant(-noise_bw, noise_bw, 1.0, SpectrumKind::noise_psd);
  c.f_nyq = nyquist_rate(c.H);
  c.notes = "noise flat beyond the channel band";
  return c;
}

NamedChannel multiband_channel() {
  NamedChannel c;
  c.name = "multiband";
  c.H = SpectralFunction::from_bands(
      {{-0.5, -0.4, 1.0}, {-0.2, -0.1, 1.0}, {0.1, 0.2, 1.0}, {0.4, 0.5, 1.0}}, 0.1,
      SpectrumKind::channel);
  c.S_eta = SpectralFunction::constant(-0.5, 0.5, 1.0, SpectrumKind::noise_psd);
  c.f_nyq = nyquist_rate(c.H);
  c.notes = "support measure 0.4";
  return c;
}

NamedChannel three_subband_channel() {
  NamedChannel c;
  c.name = "three_subband";
  const double g = std::sqrt(2.0);
  c.H = SpectralFunction::from_bands({{-1.5, -0.5, g}, {-0.5, 0.5, 1.0}, {0.5, 1.5, g}}, 1.0,
                                     SpectrumKind::channel);
  c.S_eta = SpectralFunction::constant(-1.5, 1.5, 1.0, SpectrumKind::noise_psd);
  c.f_nyq = nyquist_rate(c.H);
  return c;
}

NamedChannel random_piecewise_channel(std::uint64_t seed, int n_subbands, double f_q) {
  if (n_subbands < 2 || n_subbands % 2 != 0) throw InvalidChannelShape("n_subbands must be even");
  if (!(f_q > 0.0)) throw InvalidChannelShape("f_q must be positive");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> snr(0.1, 10.0);
  std::vector<cplx> h(static_cast<std::size_t>(n_subbands));
  for (cplx& v : h) v = std::sqrt(snr(rng));
  NamedChannel c;
  c.name = "random_piecewise";
  const double lo = -0.5 * n_subbands * f_q;
  c.H = SpectralFunction(lo, f_q, std::move(h), SpectrumKind::channel);
  c.S_eta = SpectralFunction::constant(lo, -lo, 1.0, SpectrumKind::noise_psd);
  c.f_nyq = nyquist_rate(c.H);
  return c;
}

}  // namespace sampcap
