#pragma once

#include <cstdint>
#include <string>

#include "sampcap/spectra.hpp"

namespace sampcap {

struct NamedChannel {
  std::string name;
  SpectralFunction H;
  SpectralFunction S_eta;
  double f_nyq = 0.0;
  std::string notes;
};

// H = 1 and unit noise on [-B, B).
NamedChannel flat_channel(double B);

// H = 1 on [-B, B), unit noise on the wider band [-noise_bw, noise_bw).
NamedChannel wide_noise_channel(double B, double noise_bw);

// H = 1 for |f| in [0.1, 0.2) or [0.4, 0.5), unit noise on [-0.5, 0.5).
// Support measure 0.4, Nyquist rate 1.
NamedChannel multiband_channel();

// Three unit-width subbands on [-1.5, 1.5) with SNRs 2, 1, 2 and unit noise.
// Sampled at 2 after a single filter the best equivalent gains are {2, 1};
// modulating by 1 + exp(j 2 pi 3 t) recovers {2, 2}.
NamedChannel three_subband_channel();

// n_subbands subbands of width f_q centred on 0, flat SNR per subband drawn
// from [0.1, 10], unit noise. Deterministic in the seed.
NamedChannel random_piecewise_channel(std::uint64_t seed, int n_subbands, double f_q);

}  // namespace sampcap
