#pragma once

#include <Eigen/Dense>
#include <map>
#include <variant>
#include <vector>

#include "sampcap/spectra.hpp"
#include "sampcap/waterfill.hpp"

namespace sampcap {

struct SingleFilter {
  SpectralFunction S;
};

// M branches, each sampled at f_s / M.
struct FilterBank {
  std::vector<SpectralFunction> filters;
};

// Branch: prefilter P, multiply by q(t) = sum_u c^u exp(j 2 pi u f_q t),
// postfilter S, sample at f_s / M.
struct ModulationBranch {
  SpectralFunction P;
  std::map<int, cplx> coeffs;
  SpectralFunction S;
};

struct ModulationBank {
  std::vector<ModulationBranch> branches;
  double f_q = 1.0;
  int a = 1;
  int b = 1;
};

using SamplerSpec = std::variant<SingleFilter, FilterBank, ModulationBank>;

// Per-bin symbols of a filter bank. Columns follow the aliased set (after
// dropping members where H and S_eta both vanish).
struct SymbolMatrices {
  std::vector<AliasSample> aliases;
  Eigen::MatrixXcd F_s;  // M x K, S_i * sqrt(S_eta)
  Eigen::VectorXcd F_h;  // diagonal, H / sqrt(S_eta)
};

// Row phases of the modulation symbols: exp(+j2pi l Ts (.)) models the l-th
// sample delay; the conjugate variant flips the sign.
enum class PhaseConvention { delay, conjugate };

struct ModSymbolMatrices {
  std::vector<AliasSample> aliases;
  Eigen::MatrixXcd F_eta;  // (a*M) x K
  Eigen::VectorXcd F_h;
};

SymbolMatrices filterbank_symbols(const SpectralFunction& H, const SpectralFunction& S_eta,
                                  const std::vector<SpectralFunction>& filters, double f_s,
                                  double f);

ModSymbolMatrices modbank_symbols(const SpectralFunction& H, const SpectralFunction& S_eta,
                                  const ModulationBank& bank, double f_s, double f,
                                  PhaseConvention phase = PhaseConvention::delay);

// Eigenvalues (descending, length F.rows()) of W F diag(F_h) diag(F_h)* F* W
// with W = (F F*)^{-1/2}. All-zero rows observe nothing and contribute a zero
// eigenvalue; remaining rank deficiency throws SingularWhitening.
Eigen::VectorXd whitened_gains(const Eigen::MatrixXcd& F, const Eigen::VectorXcd& F_h);

// Whitened rows (F F*)^{-1/2} F, with all-zero rows removed.
Eigen::MatrixXcd whitened_rows(const Eigen::MatrixXcd& F);

struct SampledCapacity {
  WaterfillSolution solution;
  FrequencyGrid grid;
  std::size_t per_bin = 1;
  std::vector<double> gains;  // bin-major, per_bin entries per bin

  double capacity() const { return solution.capacity; }
  double gain(std::size_t bin, std::size_t k) const { return gains[bin * per_bin + k]; }
};

void validate_modbank(const ModulationBank& bank, double f_s);

FrequencyGrid single_filter_grid(const SpectralFunction& H, const SpectralFunction& S_eta,
                                 const SpectralFunction& S, double f_s);
FrequencyGrid filterbank_grid(const SpectralFunction& H, const SpectralFunction& S_eta,
                              const std::vector<SpectralFunction>& filters, double f_s);
FrequencyGrid modbank_grid(const SpectralFunction& H, const SpectralFunction& S_eta,
                           const ModulationBank& bank);

SampledCapacity capacity_single_filter(const SpectralFunction& H, const SpectralFunction& S_eta,
                                       const SpectralFunction& S, double f_s, double P,
                                       const FrequencyGrid& grid);
SampledCapacity capacity_single_filter(const SpectralFunction& H, const SpectralFunction& S_eta,
                                       const SpectralFunction& S, double f_s, double P);

SampledCapacity capacity_filterbank(const SpectralFunction& H, const SpectralFunction& S_eta,
                                    const std::vector<SpectralFunction>& filters, double f_s,
                                    double P, const FrequencyGrid& grid);
SampledCapacity capacity_filterbank(const SpectralFunction& H, const SpectralFunction& S_eta,
                                    const std::vector<SpectralFunction>& filters, double f_s,
                                    double P);

SampledCapacity capacity_modbank(const SpectralFunction& H, const SpectralFunction& S_eta,
                                 const ModulationBank& bank, double f_s, double P,
                                 const FrequencyGrid& grid,
                                 PhaseConvention phase = PhaseConvention::delay);
SampledCapacity capacity_modbank(const SpectralFunction& H, const SpectralFunction& S_eta,
                                 const ModulationBank& bank, double f_s, double P,
                                 PhaseConvention phase = PhaseConvention::delay);

SampledCapacity sampled_capacity(const SpectralFunction& H, const SpectralFunction& S_eta,
                                 const SamplerSpec& sampler, double f_s, double P);

}  // namespace sampcap
