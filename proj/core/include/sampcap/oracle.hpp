#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "sampcap/capacity.hpp"

namespace sampcap {

// Finite-horizon discretization: n output samples per branch at period Ts,
// input sampled on a grid of step delta = Ts / k over n*k points.
// Rows are ordered (sample i, branch b) -> i * M + b.
struct DiscreteModel {
  int n = 0;
  int k = 0;
  int M = 1;
  double delta = 1.0;
  double Ts = 1.0;
  Eigen::MatrixXcd H_tilde;    // (n M) x (n k)
  Eigen::MatrixXcd S_mat;      // explicit filter taps on the noise grid; empty when closed form
  Eigen::MatrixXcd noise_cov;  // covariance of the filtered noise samples

  double horizon() const { return n * Ts; }
};

// Explicit taps on the delta grid. h and each s[b] start at lag 0; the input
// occupies indices [input_offset, input_offset + n k); noise samples have
// variance 1/delta.
DiscreteModel discretize_taps(const std::vector<cplx>& h, const std::vector<std::vector<cplx>>& s,
                              int n, int k, double delta, int input_offset = 0);

// Impulse responses taken from the spectra by exact inverse transforms of the
// piecewise-constant products; noise covariance in closed form.
DiscreteModel discretize(const SpectralFunction& H, const SpectralFunction& S_eta,
                         const std::vector<SpectralFunction>& filters, double f_s, int n, int k);

DiscreteModel discretize_modbank(const SpectralFunction& H, const SpectralFunction& S_eta,
                                 const ModulationBank& bank, double f_s, int n, int k);

// Inverse transform of a piecewise-constant spectrum at time t.
cplx inverse_transform(const SpectralFunction& fn, double t);

// Capacity rate (nats per unit time) of the discretized channel under the
// average input power P per input sample.
double finite_capacity(const DiscreteModel& model, double P);

// Whitening (noise_cov)^{-1/2}.
Eigen::MatrixXcd whitening(const DiscreteModel& model);

// Columns are independent draws of the filtered noise.
Eigen::MatrixXcd draw_noise(const DiscreteModel& model, int trials, std::uint64_t seed);

struct OrthogonalityStats {
  int trials = 0;
  double max_residual = 0.0;  // max |E[(x - x_hat) y*]| normalized per entry
  double bound() const { return trials > 0 ? 5.0 / std::sqrt(static_cast<double>(trials)) : 0.0; }
};

// Monte-Carlo check of E[(x - x_hat) y*] = 0 for the linear MMSE estimate of
// x (white, variance input_var per sample) from y = H x + noise. The
// estimator is scaled by `estimator_scale` (1 for the Wiener solution).
OrthogonalityStats mc_orthogonality(const DiscreteModel& model, double input_var, int trials,
                                    std::uint64_t seed, double estimator_scale = 1.0);

}  // namespace sampcap
