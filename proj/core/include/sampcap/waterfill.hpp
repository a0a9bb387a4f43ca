#pragma once

#include <vector>

#include "sampcap/spectra.hpp"

namespace sampcap {

// Parallel Gaussian channels sharing one power budget. Each entry carries
// measure `weight` (a bin width, or 1/T for the discrete oracle).
struct ParallelChannelSet {
  std::vector<double> gains;
  double weight = 1.0;
};

struct WaterfillSolution {
  double nu = 0.0;
  double capacity = 0.0;  // nats
  std::vector<double> powers;
  int iterations = 0;
};

WaterfillSolution waterfill(const ParallelChannelSet& channels, double P);

// Exact water level for the active set {gain > 1/nu_guess}.
double closed_form_level(const ParallelChannelSet& channels, double P, double nu_guess);

double allocated_power(const ParallelChannelSet& channels, double nu);

// Water-filling over |H|^2 / S_eta on the channel support.
WaterfillSolution nyquist_capacity(const SpectralFunction& H, const SpectralFunction& S_eta,
                                   double P);

}  // namespace sampcap
