#pragma once

#include <map>
#include <optional>
#include <vector>

#include "sampcap/capacity.hpp"

namespace sampcap {

// Per bin of the fundamental interval, the alias index passed by one branch.
struct SelectionFilter {
  FrequencyGrid grid;
  double spacing = 1.0;
  std::vector<std::optional<int>> chosen;

  // 0/1 prefilter passing bin j at grid.center(j) - chosen[j] * spacing.
  SpectralFunction realize() const;
};

struct FilterDesign {
  std::vector<SelectionFilter> branches;
  SampledCapacity capacity;

  std::vector<SpectralFunction> filters() const;
};

// Strict weak order: larger SNR first, then smaller |l|, then smaller l.
bool ranks_before(double snr_x, int l_x, double snr_y, int l_y);

// Aliases of base_f at `spacing`, best first.
std::vector<AliasSample> ranked_aliases(const SpectralFunction& H, const SpectralFunction& S_eta,
                                        double base_f, double spacing);

FilterDesign optimal_prefilter(const SpectralFunction& H, const SpectralFunction& S_eta,
                               double f_s, double P, const FrequencyGrid& grid);
FilterDesign optimal_prefilter(const SpectralFunction& H, const SpectralFunction& S_eta,
                               double f_s, double P);

FilterDesign optimal_filterbank(const SpectralFunction& H, const SpectralFunction& S_eta,
                                double f_s, int M, double P, const FrequencyGrid& grid);
FilterDesign optimal_filterbank(const SpectralFunction& H, const SpectralFunction& S_eta,
                                double f_s, int M, double P);

FrequencyGrid optimal_grid(const SpectralFunction& H, const SpectralFunction& S_eta, double f_s,
                           int M);

// Water-filling over the a*M best SNRs per bin at spacing f_q / b.
SampledCapacity modbank_upper_bound(const SpectralFunction& H, const SpectralFunction& S_eta,
                                    const ModulationBank& bank, double P,
                                    const FrequencyGrid& grid);
SampledCapacity modbank_upper_bound(const SpectralFunction& H, const SpectralFunction& S_eta,
                                    const ModulationBank& bank, double P);

struct LandauWitness {
  bool achievable = false;
  double landau_rate = 0.0;  // measure of the channel support
  std::size_t max_active = 0;
  FrequencyGrid grid;
  // Per bin, the alias indices with nonzero gain; branch k takes the k-th.
  std::vector<std::vector<int>> active;
};

// True when every aliased set at spacing f_s / M holds at most M members
// with nonzero gain, so M selection branches pass the whole support.
LandauWitness landau_check(const SpectralFunction& H, const SpectralFunction& S_eta, double f_s,
                           int M);

// Channel split into 2L subbands [origin + j f_q, origin + (j+1) f_q),
// j = -L..L-1, flat SNR within each.
struct SubbandLayout {
  double origin = 0.0;
  double f_q = 1.0;
  int L = 1;

  Interval span() const { return {origin - L * f_q, origin + L * f_q}; }
  Interval subband(int j) const { return {origin + j * f_q, origin + (j + 1) * f_q}; }
};

// Single-branch modulation sampler at rate K f_q that moves the K strongest
// subbands into disjoint alias classes.
struct ModulationDesign {
  SubbandLayout layout;
  int K = 1;
  int L_star = 1;
  std::vector<double> subband_snr;  // index j + L
  std::vector<int> selected;        // descending subband indices
  std::map<int, cplx> coeffs;
  SpectralFunction passband;

  double f_s() const { return K * layout.f_q; }
  ModulationBank bank() const;
};

ModulationDesign subband_modulation_design(const SpectralFunction& H,
                                           const SpectralFunction& S_eta,
                                           const SubbandLayout& layout, int K);

}  // namespace sampcap
