#pragma once

#include <cstdint>
#include <json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "sampcap/sampcap.hpp"

namespace sampcap::cli {

enum class Units { nats, bits };

struct ChannelSource {
  std::string builtin;  // empty for inline spectra
  double B = 0.5;
  double noise_bw = 1.0;
  std::uint64_t seed = 0;
  int n_subbands = 4;
  double f_q = 0.25;
  std::optional<SpectralFunction> H;
  std::optional<SpectralFunction> S_eta;
};

struct SamplerConfig {
  // optimal | none | filter | filterbank | modulation | subband_modulation
  std::string type = "optimal";
  int M = 1;
  std::optional<SpectralFunction> S;
  std::vector<SpectralFunction> filters;
  ModulationBank bank;
  SubbandLayout layout;
  int K = 1;
};

struct JobConfig {
  ChannelSource channel;
  SamplerConfig sampler;
  double power = 1.0;
  std::optional<double> f_s;
  std::vector<double> sweep;
  std::optional<double> bin_width;
  std::optional<SpectralFunction> input_psd;  // mmse; absent means water-filling
  Units units = Units::nats;
  std::uint64_t seed = 0;
  int oracle_k = 8;
  std::vector<int> oracle_n{32, 64, 128, 256};
  std::string output;
};

NamedChannel resolve_channel(const ChannelSource& src);

// Throws ConfigError (or IncommensurateRates) naming the offending field.
JobConfig parse_config(const std::string& text);
std::string serialize_config(const JobConfig& cfg);

nlohmann::json sampler_to_json(const SamplerConfig& s);

// All rates named by the config: the sweep if present, else f_s.
std::vector<double> configured_rates(const JobConfig& cfg);

}  // namespace sampcap::cli
