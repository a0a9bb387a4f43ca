#pragma once

#include <Eigen/Dense>
#include <vector>

#include "sampcap/design.hpp"

namespace sampcap {

// Channel, noise and input PSD at one alias.
struct SignalAlias {
  int l;
  double f;
  cplx h;
  double noise;
  double input;

  double snr() const { return noise > 0.0 ? std::norm(h) / noise : 0.0; }
  // Input power recovered when this alias is observed alone.
  double explained() const {
    const double den = std::norm(h) * input + noise;
    return den > 0.0 ? input * input * std::norm(h) / den : 0.0;
  }
};

std::vector<SignalAlias> signal_aliases(const SpectralFunction& H, const SpectralFunction& S_eta,
                                        const SpectralFunction& S_X, double base_f,
                                        double spacing);

struct WienerBin {
  std::vector<SignalAlias> aliases;
  Eigen::MatrixXcd K;  // M x M covariance of the samples
  Eigen::MatrixXcd G;  // aliases x M, row v reconstructs the input at aliases[v]
  double input_power = 0.0;
  double explained = 0.0;
};

struct WienerSolution {
  FrequencyGrid grid;
  double spacing = 1.0;
  std::vector<WienerBin> bins;
  double mse = 0.0;
  double signal_power = 0.0;
};

// Linear MMSE reconstruction of x from M branches sampled at f_s / M each.
WienerSolution wiener_filter(const SpectralFunction& H, const SpectralFunction& S_eta,
                             const std::vector<SpectralFunction>& filters,
                             const SpectralFunction& S_X, double f_s, const FrequencyGrid& grid);
WienerSolution wiener_filter(const SpectralFunction& H, const SpectralFunction& S_eta,
                             const std::vector<SpectralFunction>& filters,
                             const SpectralFunction& S_X, double f_s);

struct MmseDesign {
  std::vector<SelectionFilter> branches;
  WienerSolution wiener;
  double predicted_mse = 0.0;  // from per-alias explained power
};

// Per bin, the M aliases with the largest explained power (ties: larger SNR,
// then smaller |l|, then smaller l).
MmseDesign mmse_optimal_bank(const SpectralFunction& H, const SpectralFunction& S_eta,
                             const SpectralFunction& S_X, double f_s, int M,
                             const FrequencyGrid& grid);
MmseDesign mmse_optimal_bank(const SpectralFunction& H, const SpectralFunction& S_eta,
                             const SpectralFunction& S_X, double f_s, int M);

// Input PSD [nu - 1/gamma]^+ on the aliases kept by the capacity-optimal
// M-branch bank, zero elsewhere.
SpectralFunction waterfilling_input_psd(const SpectralFunction& H, const SpectralFunction& S_eta,
                                        double f_s, int M, double P);

}  // namespace sampcap
