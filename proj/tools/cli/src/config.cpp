#include "sampcap_cli/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <json.hpp>
#include <numeric>
#include <string>

namespace sampcap::cli {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw ConfigError(path + ": " + what);
}

const json& require(const json& j, const std::string& key, const std::string& path) {
  if (!j.is_object() || !j.contains(key)) fail(path + "." + key, "missing");
  return j.at(key);
}

double number(const json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) fail(path, "expected a finite number");
  return v;
}

double positive(const json& j, const std::string& path) {
  const double v = number(j, path);
  if (!(v > 0.0)) fail(path, "expected a positive number");
  return v;
}

int integer(const json& j, const std::string& path) {
  if (!j.is_number_integer()) fail(path, "expected an integer");
  return j.get<int>();
}

cplx complex_value(const json& j, const std::string& path) {
  if (j.is_number()) return number(j, path);
  if (j.is_array() && j.size() == 2) return {number(j[0], path + "[0]"), number(j[1], path + "[1]")};
  fail(path, "expected a number or [re, im]");
}

json complex_json(const cplx& v) {
  if (v.imag() == 0.0) return v.real();
  return json::array({v.real(), v.imag()});
}

SpectralFunction parse_spectrum(const json& j, SpectrumKind kind, const std::string& path) {
  if (!j.is_object()) fail(path, "expected a spectrum object");
  const double w = positive(require(j, "bin_width", path), path + ".bin_width");
  try {
    if (j.contains("values")) {
      const double lo = number(require(j, "lo", path), path + ".lo");
      const json& vals = j.at("values");
      if (!vals.is_array()) fail(path + ".values", "expected an array");
      std::vector<cplx> values;
      for (std::size_t i = 0; i < vals.size(); ++i)
        values.push_back(complex_value(vals[i], path + ".values[" + std::to_string(i) + "]"));
      return SpectralFunction(lo, w, std::move(values), kind);
    }
    const json& bands = require(j, "bands", path);
    if (!bands.is_array()) fail(path + ".bands", "expected an array");
    std::vector<Band> out;
    for (std::size_t i = 0; i < bands.size(); ++i) {
      const std::string p = path + ".bands[" + std::to_string(i) + "]";
      out.push_back({number(require(bands[i], "lo", p), p + ".lo"),
                     number(require(bands[i], "hi", p), p + ".hi"),
                     complex_value(require(bands[i], "value", p), p + ".value")});
    }
    return SpectralFunction::from_bands(out, w, kind);
  } catch (const InvalidSpectrum& e) {
    fail(path, e.what());
  }
}

json spectrum_json(const SpectralFunction& fn) {
  json values = json::array();
  for (const cplx& v : fn.values()) values.push_back(complex_json(v));
  return {{"bin_width", fn.bin_width()}, {"lo", fn.support_lo()}, {"values", values}};
}

ChannelSource parse_channel(const json& j) {
  const std::string path = "channel";
  if (!j.is_object()) fail(path, "expected an object");
  ChannelSource c;
  if (j.contains("builtin")) {
    if (!j.at("builtin").is_string()) fail(path + ".builtin", "expected a string");
    c.builtin = j.at("builtin").get<std::string>();
    if (c.builtin == "flat") {
      c.B = positive(require(j, "B", path), path + ".B");
    } else if (c.builtin == "wide_noise") {
      c.B = positive(require(j, "B", path), path + ".B");
      c.noise_bw = positive(require(j, "noise_bw", path), path + ".noise_bw");
      if (c.noise_bw < c.B) fail(path + ".noise_bw", "must be >= B");
    } else if (c.builtin == "random_piecewise") {
      const json& seed = require(j, "seed", path);
      if (!seed.is_number_unsigned()) fail(path + ".seed", "expected a nonnegative integer");
      c.seed = seed.get<std::uint64_t>();
      c.n_subbands = integer(require(j, "n_subbands", path), path + ".n_subbands");
      if (c.n_subbands < 2 || c.n_subbands % 2) fail(path + ".n_subbands", "expected an even integer >= 2");
      c.f_q = positive(require(j, "f_q", path), path + ".f_q");
    } else if (c.builtin != "multiband" && c.builtin != "three_subband") {
      fail(path + ".builtin", "unknown channel '" + c.builtin + "'");
    }
    if (j.contains("H") || j.contains("S_eta")) fail(path, "give either builtin or inline spectra, not both");
    return c;
  }
  c.H = parse_spectrum(require(j, "H", path), SpectrumKind::channel, path + ".H");
  c.S_eta = parse_spectrum(require(j, "S_eta", path), SpectrumKind::noise_psd, path + ".S_eta");
  return c;
}

json channel_json(const ChannelSource& c) {
  if (c.builtin.empty()) return {{"H", spectrum_json(*c.H)}, {"S_eta", spectrum_json(*c.S_eta)}};
  json j{{"builtin", c.builtin}};
  if (c.builtin == "flat") j["B"] = c.B;
  if (c.builtin == "wide_noise") {
    j["B"] = c.B;
    j["noise_bw"] = c.noise_bw;
  }
  if (c.builtin == "random_piecewise") {
    j["seed"] = c.seed;
    j["n_subbands"] = c.n_subbands;
    j["f_q"] = c.f_q;
  }
  return j;
}

ModulationBranch parse_branch(const json& j, const std::string& path) {
  ModulationBranch br;
  br.P = parse_spectrum(require(j, "P", path), SpectrumKind::premodulation, path + ".P");
  br.S = parse_spectrum(require(j, "S", path), SpectrumKind::prefilter, path + ".S");
  const json& coeffs = require(j, "coeffs", path);
  if (!coeffs.is_array() || coeffs.empty()) fail(path + ".coeffs", "expected a nonempty array");
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    const std::string p = path + ".coeffs[" + std::to_string(i) + "]";
    const int u = integer(require(coeffs[i], "u", p), p + ".u");
    if (br.coeffs.count(u)) fail(p + ".u", "duplicate index");
    br.coeffs[u] = complex_value(require(coeffs[i], "value", p), p + ".value");
  }
  return br;
}

SamplerConfig parse_sampler(const json& j) {
  const std::string path = "sampler";
  if (!j.is_object()) fail(path, "expected an object");
  SamplerConfig s;
  const json& type = require(j, "type", path);
  if (!type.is_string()) fail(path + ".type", "expected a string");
  s.type = type.get<std::string>();
  if (s.type == "optimal") {
    s.M = j.contains("M") ? integer(j.at("M"), path + ".M") : 1;
    if (s.M < 1) fail(path + ".M", "expected a positive integer");
  } else if (s.type == "none") {
  } else if (s.type == "filter") {
    s.S = parse_spectrum(require(j, "S", path), SpectrumKind::prefilter, path + ".S");
  } else if (s.type == "filterbank") {
    const json& fs = require(j, "filters", path);
    if (!fs.is_array() || fs.empty()) fail(path + ".filters", "expected a nonempty array");
    for (std::size_t i = 0; i < fs.size(); ++i)
      s.filters.push_back(parse_spectrum(fs[i], SpectrumKind::prefilter,
                                         path + ".filters[" + std::to_string(i) + "]"));
    s.M = static_cast<int>(s.filters.size());
  } else if (s.type == "modulation") {
    s.bank.f_q = positive(require(j, "f_q", path), path + ".f_q");
    s.bank.a = integer(require(j, "a", path), path + ".a");
    s.bank.b = integer(require(j, "b", path), path + ".b");
    if (s.bank.a < 1) fail(path + ".a", "expected a positive integer");
    if (s.bank.b < 1) fail(path + ".b", "expected a positive integer");
    if (std::gcd(s.bank.a, s.bank.b) != 1) fail(path, "a and b must be coprime");
    const json& brs = require(j, "branches", path);
    if (!brs.is_array() || brs.empty()) fail(path + ".branches", "expected a nonempty array");
    for (std::size_t i = 0; i < brs.size(); ++i)
      s.bank.branches.push_back(parse_branch(brs[i], path + ".branches[" + std::to_string(i) + "]"));
    s.M = static_cast<int>(s.bank.branches.size());
  } else if (s.type == "subband_modulation") {
    s.layout.origin = j.contains("origin") ? number(j.at("origin"), path + ".origin") : 0.0;
    s.layout.f_q = positive(require(j, "f_q", path), path + ".f_q");
    s.layout.L = integer(require(j, "L", path), path + ".L");
    s.K = integer(require(j, "K", path), path + ".K");
    if (s.layout.L < 1) fail(path + ".L", "expected a positive integer");
    if (s.K < 1 || s.K > 2 * s.layout.L) fail(path + ".K", "expected 1 <= K <= 2L");
  } else {
    fail(path + ".type", "unknown sampler '" + s.type + "'");
  }
  return s;
}

}  // namespace

json sampler_to_json(const SamplerConfig& s) {
  json j{{"type", s.type}};
  if (s.type == "optimal") j["M"] = s.M;
  if (s.type == "filter") j["S"] = spectrum_json(*s.S);
  if (s.type == "filterbank") {
    j["filters"] = json::array();
    for (const SpectralFunction& f : s.filters) j["filters"].push_back(spectrum_json(f));
  }
  if (s.type == "modulation") {
    j["f_q"] = s.bank.f_q;
    j["a"] = s.bank.a;
    j["b"] = s.bank.b;
    j["branches"] = json::array();
    for (const ModulationBranch& br : s.bank.branches) {
      json coeffs = json::array();
      for (const auto& [u, c] : br.coeffs) coeffs.push_back({{"u", u}, {"value", complex_json(c)}});
      j["branches"].push_back({{"P", spectrum_json(br.P)}, {"coeffs", coeffs}, {"S", spectrum_json(br.S)}});
    }
  }
  if (s.type == "subband_modulation") {
    j["origin"] = s.layout.origin;
    j["f_q"] = s.layout.f_q;
    j["L"] = s.layout.L;
    j["K"] = s.K;
  }
  return j;
}

namespace {

std::vector<double> parse_sweep(const json& j) {
  std::vector<double> out;
  if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i)
      out.push_back(positive(j[i], "sweep[" + std::to_string(i) + "]"));
  } else if (j.is_object()) {
    const double from = positive(require(j, "from", "sweep"), "sweep.from");
    const double to = positive(require(j, "to", "sweep"), "sweep.to");
    const double step = positive(require(j, "step", "sweep"), "sweep.step");
    if (to < from) fail("sweep.to", "must be >= sweep.from");
    const long long n = std::llround(std::floor((to - from) / step + 1e-9));
    if (n > 100000) fail("sweep", "too many rates");
    for (long long i = 0; i <= n; ++i) {
      // Rounded to 12 significant digits so 0.05 * 3 prints as 0.15.
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.12g", from + static_cast<double>(i) * step);
      out.push_back(std::strtod(buf, nullptr));
    }
  } else {
    fail("sweep", "expected an array or {from, to, step}");
  }
  for (std::size_t i = 1; i < out.size(); ++i)
    if (!(out[i] > out[i - 1])) fail("sweep", "rates must be strictly increasing");
  return out;
}

// Spacing of the fundamental interval for a given rate.
double alias_spacing(const SamplerConfig& s, double f_s) {
  if (s.type == "modulation") return s.bank.f_q / s.bank.b;
  if (s.type == "subband_modulation") return s.layout.f_q;
  return f_s / s.M;
}

void check_rates(const JobConfig& cfg) {
  const NamedChannel ch = resolve_channel(cfg.channel);
  std::vector<const SpectralFunction*> fns{&ch.H, &ch.S_eta};
  if (cfg.sampler.S) fns.push_back(&*cfg.sampler.S);
  for (const SpectralFunction& f : cfg.sampler.filters) fns.push_back(&f);
  for (const ModulationBranch& br : cfg.sampler.bank.branches) {
    fns.push_back(&br.P);
    fns.push_back(&br.S);
  }
  if (cfg.input_psd) fns.push_back(&*cfg.input_psd);
  const std::vector<double> rates = configured_rates(cfg);
  for (std::size_t i = 0; i < rates.size(); ++i) {
    const std::string where = cfg.sweep.empty() ? "f_s" : "sweep[" + std::to_string(i) + "]";
    const double spacing = alias_spacing(cfg.sampler, rates[i]);
    try {
      if (cfg.bin_width) {
        if (!is_multiple(spacing, *cfg.bin_width))
          throw IncommensurateRates("alias spacing " + std::to_string(spacing) +
                                    " is not a multiple of bin_width");
        const FrequencyGrid grid = fundamental_grid(spacing, *cfg.bin_width);
        require_commensurate(grid, spacing, fns);
      } else {
        lattice_step(fns, spacing);
      }
    } catch (const IncommensurateRates& e) {
      throw IncommensurateRates(where + ": " + e.what());
    }
  }
}

}  // namespace

NamedChannel resolve_channel(const ChannelSource& src) {
  if (src.builtin.empty()) return {"inline", *src.H, *src.S_eta, 0.0, ""};
  if (src.builtin == "flat") return flat_channel(src.B);
  if (src.builtin == "wide_noise") return wide_noise_channel(src.B, src.noise_bw);
  if (src.builtin == "multiband") return multiband_channel();
  if (src.builtin == "three_subband") return three_subband_channel();
  if (src.builtin == "random_piecewise")
    return random_piecewise_channel(src.seed, src.n_subbands, src.f_q);
  throw ConfigError("channel.builtin: unknown channel '" + src.builtin + "'");
}

std::vector<double> configured_rates(const JobConfig& cfg) {
  if (!cfg.sweep.empty()) return cfg.sweep;
  if (cfg.f_s) return {*cfg.f_s};
  if (cfg.sampler.type == "subband_modulation") return {cfg.sampler.K * cfg.sampler.layout.f_q};
  return {};
}

JobConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config: expected a JSON object");

  static const std::vector<std::string> known{"channel", "sampler", "power",  "f_s",    "sweep",
                                              "bin_width", "input_psd", "units", "seed", "oracle",
                                              "output"};
  for (const auto& [key, _] : j.items())
    if (std::find(known.begin(), known.end(), key) == known.end()) fail(key, "unknown field");

  JobConfig cfg;
  cfg.channel = parse_channel(require(j, "channel", "config"));
  cfg.sampler = j.contains("sampler") ? parse_sampler(j.at("sampler")) : SamplerConfig{};
  cfg.power = number(require(j, "power", "config"), "power");
  if (cfg.power < 0.0) fail("power", "must be nonnegative");
  if (j.contains("f_s")) cfg.f_s = positive(j.at("f_s"), "f_s");
  if (j.contains("sweep")) cfg.sweep = parse_sweep(j.at("sweep"));
  if (j.contains("bin_width")) cfg.bin_width = positive(j.at("bin_width"), "bin_width");
  if (j.contains("input_psd"))
    cfg.input_psd = parse_spectrum(j.at("input_psd"), SpectrumKind::input_psd, "input_psd");
  if (j.contains("units")) {
    const json& u = j.at("units");
    if (u == "nats")
      cfg.units = Units::nats;
    else if (u == "bits")
      cfg.units = Units::bits;
    else
      fail("units", "expected \"nats\" or \"bits\"");
  }
  if (j.contains("seed")) {
    if (!j.at("seed").is_number_unsigned()) fail("seed", "expected a nonnegative integer");
    cfg.seed = j.at("seed").get<std::uint64_t>();
  }
  if (j.contains("oracle")) {
    const json& o = j.at("oracle");
    if (!o.is_object()) fail("oracle", "expected an object");
    if (o.contains("k")) cfg.oracle_k = integer(o.at("k"), "oracle.k");
    if (cfg.oracle_k < 1) fail("oracle.k", "expected a positive integer");
    if (o.contains("n")) {
      cfg.oracle_n.clear();
      if (!o.at("n").is_array() || o.at("n").empty()) fail("oracle.n", "expected a nonempty array");
      for (std::size_t i = 0; i < o.at("n").size(); ++i) {
        const int n = integer(o.at("n")[i], "oracle.n[" + std::to_string(i) + "]");
        if (n < 1) fail("oracle.n[" + std::to_string(i) + "]", "expected a positive integer");
        cfg.oracle_n.push_back(n);
      }
    }
  }
  if (j.contains("output")) {
    if (!j.at("output").is_string()) fail("output", "expected a string");
    cfg.output = j.at("output").get<std::string>();
  }
  check_rates(cfg);
  return cfg;
}

std::string serialize_config(const JobConfig& cfg) {
  json j;
  j["channel"] = channel_json(cfg.channel);
  j["sampler"] = sampler_to_json(cfg.sampler);
  j["power"] = cfg.power;
  if (cfg.f_s) j["f_s"] = *cfg.f_s;
  if (!cfg.sweep.empty()) j["sweep"] = cfg.sweep;
  if (cfg.bin_width) j["bin_width"] = *cfg.bin_width;
  if (cfg.input_psd) j["input_psd"] = spectrum_json(*cfg.input_psd);
  j["units"] = cfg.units == Units::bits ? "bits" : "nats";
  j["seed"] = cfg.seed;
  j["oracle"] = {{"k", cfg.oracle_k}, {"n", cfg.oracle_n}};
  if (!cfg.output.empty()) j["output"] = cfg.output;
  return j.dump(2) + "\n";
}

}  // namespace sampcap::cli
