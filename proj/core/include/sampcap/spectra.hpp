#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace sampcap {

using cplx = std::complex<double>;

// Relative tolerance for lattice/commensurability checks.
inline constexpr double kLatticeTol = 1e-9;
// Relative threshold below which a filter or Gram matrix counts as singular.
inline constexpr double kEpsInv = 1e-12;

enum class SpectrumKind { channel, prefilter, premodulation, noise_psd, input_psd };

// Half-open interval [lo, hi).
struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  bool empty() const { return !(hi > lo); }
  double length() const { return empty() ? 0.0 : hi - lo; }
  bool contains(double f) const { return f >= lo && f < hi; }
};

struct Band {
  double lo;
  double hi;
  cplx value;
};

// Piecewise-constant function of frequency on the bins
// [support_lo + j*bin_width, support_lo + (j+1)*bin_width). Zero elsewhere.
class SpectralFunction {
 public:
  SpectralFunction() = default;
  SpectralFunction(double support_lo, double bin_width, std::vector<cplx> values,
                   SpectrumKind kind);

  // Bands may leave gaps (filled with 0) but must not overlap and must sit on
  // the bin_width lattice anchored at the lowest band edge.
  static SpectralFunction from_bands(const std::vector<Band>& bands, double bin_width,
                                     SpectrumKind kind);
  // One bin spanning [lo, hi).
  static SpectralFunction constant(double lo, double hi, cplx value, SpectrumKind kind);

  cplx operator()(double f) const;

  double support_lo() const { return lo_; }
  double support_hi() const { return lo_ + width_ * static_cast<double>(values_.size()); }
  Interval support() const { return {support_lo(), support_hi()}; }
  double bin_width() const { return width_; }
  std::size_t size() const { return values_.size(); }
  bool empty() const { return values_.empty(); }
  const std::vector<cplx>& values() const { return values_; }
  SpectrumKind kind() const { return kind_; }
  double max_abs() const;
  // Maximal runs of equal nonzero value, merged across bins.
  std::vector<Band> bands() const;

 private:
  double lo_ = 0.0;
  double width_ = 1.0;
  std::vector<cplx> values_;
  SpectrumKind kind_ = SpectrumKind::channel;
};

cplx eval(const SpectralFunction& fn, double f);

// True when x is an integer multiple of step within kLatticeTol.
bool is_multiple(double x, double step);
// Largest step dividing every nonzero entry; throws IncommensurateRates when
// the values share no common step above kLatticeTol relative.
double common_step(const std::vector<double>& values);
// Step shared by the lattices of all functions (edges and widths) and the
// alias spacing.
double lattice_step(const std::vector<const SpectralFunction*>& fns, double spacing);

struct FrequencyGrid {
  double f_lo = 0.0;
  double f_hi = 0.0;
  std::size_t n_bins = 0;

  double width() const { return (f_hi - f_lo) / static_cast<double>(n_bins); }
  double center(std::size_t j) const {
    return f_lo + (static_cast<double>(j) + 0.5) * width();
  }
};

FrequencyGrid make_grid(double f_lo, double f_hi, std::size_t n_bins);
// One period of length `spacing`, split into bins of `step`, starting at the
// lattice point nearest -spacing/2.
FrequencyGrid fundamental_grid(double spacing, double step);
// Throws IncommensurateRates unless grid bins align with every function's
// lattice and the grid covers exactly one period of `spacing`.
void require_commensurate(const FrequencyGrid& grid, double spacing,
                          const std::vector<const SpectralFunction*>& fns);

struct AliasedSet {
  double base_f = 0.0;
  double spacing = 1.0;
  std::vector<int> indices;  // ascending

  double frequency(int l) const { return base_f - l * spacing; }
  std::size_t size() const { return indices.size(); }
};

// All l with base_f - l*spacing inside the (union of) half-open supports.
AliasedSet aliased_set(double base_f, double spacing, Interval support);
AliasedSet aliased_set(double base_f, double spacing, const std::vector<Interval>& supports);

// Channel and noise at one member of an aliased set.
struct AliasSample {
  int l;
  double f;
  cplx h;
  double noise;
  double snr() const { return std::norm(h) / noise; }
};

// Aliases of base_f over the union of the H and S_eta supports, skipping
// members where both vanish. Throws UnboundedSnr where S_eta = 0 but H != 0.
std::vector<AliasSample> channel_aliases(const SpectralFunction& H,
                                         const SpectralFunction& S_eta, double base_f,
                                         double spacing);

// Folded SNR of a single prefilter S sampled at f_s, evaluated at f.
double folded_snr(const SpectralFunction& H, const SpectralFunction& S_eta,
                  const SpectralFunction& S, double f_s, double f);

}  // namespace sampcap
