#include "sampcap_cli/jobs.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <future>
#include <limits>
#include <sstream>
#include <thread>

namespace sampcap::cli {

using nlohmann::json;

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

double unit_scale(Units u) { return u == Units::bits ? 1.0 / std::log(2.0) : 1.0; }

// All-pass over the hull of the channel and noise supports.
SpectralFunction all_pass(const NamedChannel& ch) {
  const double lo = std::min(ch.H.support_lo(), ch.S_eta.support_lo());
  const double hi = std::max(ch.H.support_hi(), ch.S_eta.support_hi());
  return SpectralFunction::constant(lo, hi, 1.0, SpectrumKind::prefilter);
}

double support_measure(const SpectralFunction& fn) {
  double m = 0.0;
  for (const cplx& v : fn.values())
    if (v != 0.0) m += fn.bin_width();
  return m;
}

std::optional<FrequencyGrid> override_grid(const JobConfig& cfg, double spacing) {
  if (!cfg.bin_width) return std::nullopt;
  return fundamental_grid(spacing, *cfg.bin_width);
}

void require_subband_rate(const JobConfig& cfg, double f_s) {
  const double expected = cfg.sampler.K * cfg.sampler.layout.f_q;
  if (std::abs(f_s - expected) > kLatticeTol * expected)
    throw ConfigError("subband_modulation samples at K * f_q = " + format_double(expected));
}

ModulationDesign subband_design(const JobConfig& cfg, const NamedChannel& ch) {
  return subband_modulation_design(ch.H, ch.S_eta, cfg.sampler.layout, cfg.sampler.K);
}

FilterDesign optimal_design(const JobConfig& cfg, const NamedChannel& ch, double f_s) {
  const auto grid = override_grid(cfg, f_s / cfg.sampler.M);
  if (grid) return optimal_filterbank(ch.H, ch.S_eta, f_s, cfg.sampler.M, cfg.power, *grid);
  return optimal_filterbank(ch.H, ch.S_eta, f_s, cfg.sampler.M, cfg.power);
}

SampledCapacity closed_form(const JobConfig& cfg, const NamedChannel& ch, double f_s) {
  const SamplerConfig& s = cfg.sampler;
  if (s.type == "optimal") return optimal_design(cfg, ch, f_s).capacity;
  if (s.type == "subband_modulation") {
    require_subband_rate(cfg, f_s);
    const ModulationBank bank = subband_design(cfg, ch).bank();
    const auto grid = override_grid(cfg, bank.f_q / bank.b);
    if (grid) return capacity_modbank(ch.H, ch.S_eta, bank, f_s, cfg.power, *grid);
    return capacity_modbank(ch.H, ch.S_eta, bank, f_s, cfg.power);
  }
  const SamplerSpec spec = realize_sampler(cfg, ch, f_s);
  if (const auto* bank = std::get_if<ModulationBank>(&spec)) {
    const auto grid = override_grid(cfg, bank->f_q / bank->b);
    if (grid) return capacity_modbank(ch.H, ch.S_eta, *bank, f_s, cfg.power, *grid);
    return capacity_modbank(ch.H, ch.S_eta, *bank, f_s, cfg.power);
  }
  std::vector<SpectralFunction> filters;
  if (const auto* single = std::get_if<SingleFilter>(&spec))
    filters.push_back(single->S);
  else
    filters = std::get<FilterBank>(spec).filters;
  const auto grid = override_grid(cfg, f_s / static_cast<double>(filters.size()));
  if (grid) return capacity_filterbank(ch.H, ch.S_eta, filters, f_s, cfg.power, *grid);
  return capacity_filterbank(ch.H, ch.S_eta, filters, f_s, cfg.power);
}

double single_rate(const JobConfig& cfg) {
  const std::vector<double> rates = configured_rates(cfg);
  if (rates.size() != 1) throw ConfigError("f_s: this subcommand needs exactly one sampling rate");
  return rates.front();
}

std::vector<SpectralFunction> filters_of(const JobConfig& cfg, const NamedChannel& ch, double f_s) {
  const SamplerSpec spec = realize_sampler(cfg, ch, f_s);
  if (const auto* single = std::get_if<SingleFilter>(&spec)) return {single->S};
  if (const auto* bank = std::get_if<FilterBank>(&spec)) return bank->filters;
  throw ConfigError("sampler.type: mmse needs a filter or filter bank sampler");
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c == '\n' ? ' ' : c;
  }
  return out + "\"";
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        out.back() += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        out.back() += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.emplace_back();
    } else {
      out.back() += c;
    }
  }
  return out;
}

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

SamplerSpec realize_sampler(const JobConfig& cfg, const NamedChannel& ch, double f_s) {
  const SamplerConfig& s = cfg.sampler;
  if (s.type == "none") return SingleFilter{all_pass(ch)};
  if (s.type == "filter") return SingleFilter{*s.S};
  if (s.type == "filterbank") return FilterBank{s.filters};
  if (s.type == "modulation") return s.bank;
  if (s.type == "subband_modulation") {
    require_subband_rate(cfg, f_s);
    return subband_design(cfg, ch).bank();
  }
  const FilterDesign d = optimal_design(cfg, ch, f_s);
  if (s.M == 1) return SingleFilter{d.filters().front()};
  return FilterBank{d.filters()};
}

CurveRow evaluate_rate(const JobConfig& cfg, const NamedChannel& ch, double f_s) {
  const SampledCapacity c = closed_form(cfg, ch, f_s);
  CurveRow row;
  row.f_s = f_s;
  row.capacity = c.capacity();
  row.nu = c.solution.nu;
  row.nyquist_capacity = nyquist_capacity(ch.H, ch.S_eta, cfg.power).capacity;
  return row;
}

CapacityCurve run_sweep(const JobConfig& cfg) {
  const NamedChannel ch = resolve_channel(cfg.channel);
  CapacityCurve curve;
  curve.nyquist_capacity = nyquist_capacity(ch.H, ch.S_eta, cfg.power).capacity;
  curve.landau_rate = support_measure(ch.H);

  const std::vector<double> rates = configured_rates(cfg);
  if (rates.empty()) throw ConfigError("sweep: no sampling rates configured");
  curve.rows.resize(rates.size());
  const std::size_t batch = std::max(1u, std::thread::hardware_concurrency());
  for (std::size_t start = 0; start < rates.size(); start += batch) {
    const std::size_t stop = std::min(rates.size(), start + batch);
    std::vector<std::future<CurveRow>> pending;
    for (std::size_t i = start; i < stop; ++i) {
      pending.push_back(std::async(std::launch::async, [&cfg, &ch, &curve, f_s = rates[i]] {
        try {
          return evaluate_rate(cfg, ch, f_s);
        } catch (const std::exception& e) {
          return CurveRow{f_s, kNan, kNan, curve.nyquist_capacity, e.what()};
        }
      }));
    }
    for (std::size_t i = start; i < stop; ++i) curve.rows[i] = pending[i - start].get();
  }
  return curve;
}

CapacityCurve run_capacity(const JobConfig& cfg) {
  const NamedChannel ch = resolve_channel(cfg.channel);
  CapacityCurve curve;
  curve.rows.push_back(evaluate_rate(cfg, ch, single_rate(cfg)));
  curve.nyquist_capacity = curve.rows.front().nyquist_capacity;
  curve.landau_rate = support_measure(ch.H);
  return curve;
}

std::vector<OracleRow> run_oracle(const JobConfig& cfg, const std::vector<int>& n_list) {
  const NamedChannel ch = resolve_channel(cfg.channel);
  const double f_s = single_rate(cfg);
  double exact = 0.0;
  try {
    exact = closed_form(cfg, ch, f_s).capacity();
  } catch (const NoUsableChannel&) {
    // nothing gets through: both sides are zero
  }
  const SamplerSpec spec = realize_sampler(cfg, ch, f_s);
  std::vector<OracleRow> rows;
  for (int n : n_list) {
    if (n < 1) throw ConfigError("--n: sizes must be positive");
    DiscreteModel model;
    if (const auto* bank = std::get_if<ModulationBank>(&spec))
      model = discretize_modbank(ch.H, ch.S_eta, *bank, f_s, n, cfg.oracle_k);
    else if (const auto* single = std::get_if<SingleFilter>(&spec))
      model = discretize(ch.H, ch.S_eta, {single->S}, f_s, n, cfg.oracle_k);
    else
      model = discretize(ch.H, ch.S_eta, std::get<FilterBank>(spec).filters, f_s, n, cfg.oracle_k);
    OracleRow row;
    row.n = n;
    row.finite_capacity = finite_capacity(model, cfg.power);
    row.closed_form = exact;
    const double diff = std::abs(row.finite_capacity - exact);
    row.rel_error = exact > 0.0 ? diff / exact : diff;
    rows.push_back(row);
  }
  return rows;
}

std::vector<MmseRow> run_mmse(const JobConfig& cfg) {
  const NamedChannel ch = resolve_channel(cfg.channel);
  const std::vector<double> rates = configured_rates(cfg);
  if (rates.empty()) throw ConfigError("f_s: no sampling rates configured");
  if (cfg.sampler.type == "modulation" || cfg.sampler.type == "subband_modulation")
    throw ConfigError("sampler.type: mmse needs a filter or filter bank sampler");
  const bool single = rates.size() == 1;
  std::vector<MmseRow> rows;
  for (double f_s : rates) {
    MmseRow row;
    row.f_s = f_s;
    try {
      const int M = cfg.sampler.type == "optimal" ? cfg.sampler.M
                    : cfg.sampler.type == "filterbank" ? static_cast<int>(cfg.sampler.filters.size())
                                                       : 1;
      const SpectralFunction S_X = cfg.input_psd
                                       ? *cfg.input_psd
                                       : waterfilling_input_psd(ch.H, ch.S_eta, f_s, M, cfg.power);
      if (cfg.sampler.type == "optimal") {
        const MmseDesign d = mmse_optimal_bank(ch.H, ch.S_eta, S_X, f_s, M);
        row.mse = d.wiener.mse;
        row.signal_power = d.wiener.signal_power;
        row.predicted_mse = d.predicted_mse;
      } else {
        const WienerSolution w = wiener_filter(ch.H, ch.S_eta, filters_of(cfg, ch, f_s), S_X, f_s);
        row.mse = w.mse;
        row.signal_power = w.signal_power;
        row.predicted_mse = w.mse;
      }
    } catch (const std::exception& e) {
      if (single) throw;
      row.mse = row.signal_power = row.predicted_mse = kNan;
      row.error = e.what();
    }
    rows.push_back(row);
  }
  return rows;
}

std::string run_design(const JobConfig& cfg) {
  const NamedChannel ch = resolve_channel(cfg.channel);
  const double scale = unit_scale(cfg.units);
  json out;
  SamplerConfig designed;
  if (cfg.sampler.type == "optimal") {
    const double f_s = single_rate(cfg);
    const FilterDesign d = optimal_design(cfg, ch, f_s);
    designed.filters = d.filters();
    designed.M = cfg.sampler.M;
    if (designed.M == 1) {
      designed.type = "filter";
      designed.S = designed.filters.front();
      designed.filters.clear();
    } else {
      designed.type = "filterbank";
    }
    const LandauWitness w = landau_check(ch.H, ch.S_eta, f_s, cfg.sampler.M);
    out["f_s"] = f_s;
    out["capacity"] = d.capacity.capacity() * scale;
    out["nu"] = d.capacity.solution.nu;
    out["landau"] = {{"achievable", w.achievable},
                     {"landau_rate", w.landau_rate},
                     {"max_active", w.max_active}};
  } else if (cfg.sampler.type == "subband_modulation") {
    const ModulationDesign d = subband_design(cfg, ch);
    designed.type = "modulation";
    designed.bank = d.bank();
    designed.M = 1;
    const SampledCapacity c = capacity_modbank(ch.H, ch.S_eta, designed.bank, d.f_s(), cfg.power);
    out["f_s"] = d.f_s();
    out["capacity"] = c.capacity() * scale;
    out["nu"] = c.solution.nu;
    out["selected_subbands"] = d.selected;
  } else {
    throw ConfigError("sampler.type: design needs \"optimal\" or \"subband_modulation\"");
  }
  out["units"] = cfg.units == Units::bits ? "bits" : "nats";
  out["nyquist_capacity"] = nyquist_capacity(ch.H, ch.S_eta, cfg.power).capacity * scale;
  out["sampler"] = sampler_to_json(designed);
  return out.dump(2) + "\n";
}

std::string curve_csv(const CapacityCurve& curve, Units units) {
  const double scale = unit_scale(units);
  std::ostringstream os;
  os << "f_s,capacity,nu,nyquist_capacity,error\n";
  for (const CurveRow& r : curve.rows)
    os << format_double(r.f_s) << ',' << format_double(r.capacity * scale) << ','
       << format_double(r.nu) << ',' << format_double(r.nyquist_capacity * scale) << ','
       << csv_field(r.error) << '\n';
  return os.str();
}

std::string oracle_csv(const std::vector<OracleRow>& rows, Units units) {
  const double scale = unit_scale(units);
  std::ostringstream os;
  os << "n,finite_capacity,closed_form,rel_error\n";
  for (const OracleRow& r : rows)
    os << r.n << ',' << format_double(r.finite_capacity * scale) << ','
       << format_double(r.closed_form * scale) << ',' << format_double(r.rel_error) << '\n';
  return os.str();
}

std::string mmse_csv(const std::vector<MmseRow>& rows) {
  std::ostringstream os;
  os << "f_s,mse,signal_power,predicted_mse,error\n";
  for (const MmseRow& r : rows)
    os << format_double(r.f_s) << ',' << format_double(r.mse) << ','
       << format_double(r.signal_power) << ',' << format_double(r.predicted_mse) << ','
       << csv_field(r.error) << '\n';
  return os.str();
}

std::vector<CurveRow> parse_curve_csv(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  if (!std::getline(is, line) || line.rfind("f_s,capacity,nu,nyquist_capacity", 0) != 0)
    throw ConfigError("curve csv: unexpected header");
  std::vector<CurveRow> rows;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const std::vector<std::string> f = split_csv_line(line);
    if (f.size() < 4) throw ConfigError("curve csv: short row '" + line + "'");
    CurveRow r;
    r.f_s = std::strtod(f[0].c_str(), nullptr);
    r.capacity = std::strtod(f[1].c_str(), nullptr);
    r.nu = std::strtod(f[2].c_str(), nullptr);
    r.nyquist_capacity = std::strtod(f[3].c_str(), nullptr);
    if (f.size() > 4) r.error = f[4];
    rows.push_back(r);
  }
  return rows;
}

}  // namespace sampcap::cli
