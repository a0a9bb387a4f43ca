#include "sampcap/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sampcap/errors.hpp"

namespace sampcap {

namespace {

// Snap x to the nearest integer when it is within lattice tolerance.
double snap(double x) {
  const double r = std::round(x);
  return std::abs(x - r) <= kLatticeTol * std::max(1.0, std::abs(x)) ? r : x;
}

double real_gcd(double a, double b, double tol) {
  if (a < b) std::swap(a, b);
  while (b > tol) {
    double r = std::fmod(a, b);
    if (r > b - tol) r = 0.0;
    a = b;
    b = r;
  }
  return a;
}

}  // namespace

SpectralFunction::SpectralFunction(double support_lo, double bin_width,
                                   std::vector<cplx> values, SpectrumKind kind)
    : lo_(support_lo), width_(bin_width), values_(std::move(values)), kind_(kind) {
  if (!(bin_width > 0.0) || !std::isfinite(bin_width) || !std::isfinite(support_lo))
    throw InvalidSpectrum("bin_width must be positive and finite");
  const bool psd = kind == SpectrumKind::noise_psd || kind == SpectrumKind::input_psd;
  for (const cplx& v : values_) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      throw InvalidSpectrum("spectral values must be finite");
    if (psd && (v.imag() != 0.0 || v.real() < 0.0))
      throw InvalidSpectrum("power spectral densities must be real and nonnegative");
  }
}

SpectralFunction SpectralFunction::from_bands(const std::vector<Band>& bands,
                                              double bin_width, SpectrumKind kind) {
  if (!(bin_width > 0.0)) throw InvalidSpectrum("bin_width must be positive");
  if (bands.empty()) return SpectralFunction(0.0, bin_width, {}, kind);

  std::vector<Band> sorted = bands;
  std::sort(sorted.begin(), sorted.end(),
            [](const Band& x, const Band& y) { return x.lo < y.lo; });
  const double lo = sorted.front().lo;
  double hi = lo;
  for (const Band& b : sorted) {
    if (!(b.hi > b.lo)) throw InvalidSpectrum("band with empty interior");
    hi = std::max(hi, b.hi);
  }
  if (!is_multiple(hi - lo, bin_width))
    throw InvalidSpectrum("band edges are not on the bin lattice");
  const auto n = static_cast<std::size_t>(std::llround((hi - lo) / bin_width));
  std::vector<cplx> values(n, 0.0);
  std::vector<bool> used(n, false);
  for (const Band& b : sorted) {
    if (!is_multiple(b.lo - lo, bin_width) || !is_multiple(b.hi - lo, bin_width))
      throw InvalidSpectrum("band edges are not on the bin lattice");
    const auto j0 = static_cast<std::size_t>(std::llround((b.lo - lo) / bin_width));
    const auto j1 = static_cast<std::size_t>(std::llround((b.hi - lo) / bin_width));
    for (std::size_t j = j0; j < j1; ++j) {
      if (used[j]) throw InvalidSpectrum("overlapping bands");
      used[j] = true;
      values[j] = b.value;
    }
  }
  return SpectralFunction(lo, bin_width, std::move(values), kind);
}

SpectralFunction SpectralFunction::constant(double lo, double hi, cplx value,
                                            SpectrumKind kind) {
  if (!(hi > lo)) throw InvalidSpectrum("constant spectrum needs hi > lo");
  return SpectralFunction(lo, hi - lo, {value}, kind);
}

cplx SpectralFunction::operator()(double f) const {
  if (values_.empty()) return 0.0;
  const double x = snap((f - lo_) / width_);
  if (x < 0.0) return 0.0;
  const double j = std::floor(x);
  if (j >= static_cast<double>(values_.size())) return 0.0;
  return values_[static_cast<std::size_t>(j)];
}

double SpectralFunction::max_abs() const {
  double m = 0.0;
  for (const cplx& v : values_) m = std::max(m, std::abs(v));
  return m;
}

std::vector<Band> SpectralFunction::bands() const {
  std::vector<Band> out;
  for (std::size_t j = 0; j < values_.size(); ++j) {
    if (values_[j] == 0.0) continue;
    const double lo = lo_ + width_ * static_cast<double>(j);
    const double hi = lo + width_;
    if (!out.empty() && out.back().value == values_[j] &&
        std::abs(out.back().hi - lo) <= kLatticeTol * width_)
      out.back().hi = hi;
    else
      out.push_back({lo, hi, values_[j]});
  }
  return out;
}

cplx eval(const SpectralFunction& fn, double f) { return fn(f); }

bool is_multiple(double x, double step) {
  const double q = x / step;
  return std::abs(q - std::round(q)) <= kLatticeTol * std::max(1.0, std::abs(q));
}

double common_step(const std::vector<double>& values) {
  double scale = 0.0;
  for (double v : values) scale = std::max(scale, std::abs(v));
  if (scale == 0.0) throw IncommensurateRates("no nonzero lattice values");
  const double tol = kLatticeTol * scale;
  double g = 0.0;
  for (double v : values) {
    v = std::abs(v);
    if (v <= tol) continue;
    g = g == 0.0 ? v : real_gcd(g, v, tol);
  }
  if (g < 1e3 * tol) throw IncommensurateRates("values share no common lattice step");
  for (double v : values)
    if (!is_multiple(v, g)) throw IncommensurateRates("values share no common lattice step");
  return g;
}

double lattice_step(const std::vector<const SpectralFunction*>& fns, double spacing) {
  std::vector<double> vals{spacing};
  for (const SpectralFunction* fn : fns) {
    if (fn == nullptr || fn->empty()) continue;
    vals.push_back(fn->bin_width());
    vals.push_back(fn->support_lo());
  }
  return common_step(vals);
}

FrequencyGrid make_grid(double f_lo, double f_hi, std::size_t n_bins) {
  if (n_bins < 1 || !(f_hi > f_lo))
    throw InvalidSpectrum("grid needs n_bins >= 1 and f_hi > f_lo");
  return {f_lo, f_hi, n_bins};
}

FrequencyGrid fundamental_grid(double spacing, double step) {
  if (!(spacing > 0.0) || !(step > 0.0)) throw IncommensurateRates("nonpositive spacing");
  if (!is_multiple(spacing, step))
    throw IncommensurateRates("spacing " + std::to_string(spacing) +
                              " is not a multiple of bin width " + std::to_string(step));
  const long long n = std::llround(spacing / step);
  const double lo = -static_cast<double>(n / 2) * step;
  return make_grid(lo, lo + static_cast<double>(n) * step, static_cast<std::size_t>(n));
}

void require_commensurate(const FrequencyGrid& grid, double spacing,
                          const std::vector<const SpectralFunction*>& fns) {
  const double d = grid.width();
  if (std::abs(grid.f_hi - grid.f_lo - spacing) > kLatticeTol * spacing || !is_multiple(spacing, d))
    throw IncommensurateRates("grid does not cover one alias period");
  for (const SpectralFunction* fn : fns) {
    if (fn == nullptr || fn->empty()) continue;
    if (!is_multiple(fn->bin_width(), d) || !is_multiple(fn->support_lo() - grid.f_lo, d))
      throw IncommensurateRates("grid bins do not align with spectral bins");
  }
}

AliasedSet aliased_set(double base_f, double spacing, Interval support) {
  return aliased_set(base_f, spacing, std::vector<Interval>{support});
}

AliasedSet aliased_set(double base_f, double spacing, const std::vector<Interval>& supports) {
  AliasedSet out{base_f, spacing, {}};
  for (const Interval& s : supports) {
    if (s.empty()) continue;
    // base - l*spacing in [lo, hi)  <=>  (base-hi)/d < l <= (base-lo)/d
    const double upper = snap((base_f - s.lo) / spacing);
    const double lower = snap((base_f - s.hi) / spacing);
    const long long l_max = static_cast<long long>(std::floor(upper));
    const long long l_min = static_cast<long long>(std::floor(lower)) + 1;
    for (long long l = l_min; l <= l_max; ++l) out.indices.push_back(static_cast<int>(l));
  }
  std::sort(out.indices.begin(), out.indices.end());
  out.indices.erase(std::unique(out.indices.begin(), out.indices.end()), out.indices.end());
  return out;
}

std::vector<AliasSample> channel_aliases(const SpectralFunction& H,
                                         const SpectralFunction& S_eta, double base_f,
                                         double spacing) {
  const AliasedSet set = aliased_set(base_f, spacing, {H.support(), S_eta.support()});
  std::vector<AliasSample> out;
  out.reserve(set.size());
  for (int l : set.indices) {
    const double f = set.frequency(l);
    const cplx h = H(f);
    const double n = S_eta(f).real();
    if (n == 0.0) {
      if (h == 0.0) continue;
      throw UnboundedSnr("noise PSD vanishes where the channel is nonzero at f = " +
                         std::to_string(f));
    }
    out.push_back({l, f, h, n});
  }
  return out;
}

double folded_snr(const SpectralFunction& H, const SpectralFunction& S_eta,
                  const SpectralFunction& S, double f_s, double f) {
  double num = 0.0;
  double den = 0.0;
  for (const AliasSample& a : channel_aliases(H, S_eta, f, f_s)) {
    const double s2 = std::norm(S(a.f));
    num += s2 * std::norm(a.h);
    den += s2 * a.noise;
  }
  if (num == 0.0) return 0.0;
  const double scale = S.max_abs() * S.max_abs() * S_eta.max_abs();
  if (den <= kEpsInv * scale) throw DegenerateFilter("prefilter is not right-invertible at f = " +
                                                     std::to_string(f));
  return num / den;
}

}  // namespace sampcap
