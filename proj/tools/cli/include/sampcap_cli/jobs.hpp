#pragma once

#include <string>
#include <vector>

#include "sampcap_cli/config.hpp"

namespace sampcap::cli {

// Values in nats; units are applied when writing.
struct CurveRow {
  double f_s = 0.0;
  double capacity = 0.0;
  double nu = 0.0;
  double nyquist_capacity = 0.0;
  std::string error;  // empty on success; capacity and nu are NaN otherwise
};

struct CapacityCurve {
  std::vector<CurveRow> rows;  // ascending f_s
  double nyquist_capacity = 0.0;
  double landau_rate = 0.0;
};

struct OracleRow {
  int n = 0;
  double finite_capacity = 0.0;
  double closed_form = 0.0;
  double rel_error = 0.0;
};

struct MmseRow {
  double f_s = 0.0;
  double mse = 0.0;
  double signal_power = 0.0;
  double predicted_mse = 0.0;
  std::string error;
};

// Sampler of the config realized at one rate; optimal samplers are designed here.
SamplerSpec realize_sampler(const JobConfig& cfg, const NamedChannel& ch, double f_s);

// Throws on failure.
CurveRow evaluate_rate(const JobConfig& cfg, const NamedChannel& ch, double f_s);

// Rates evaluated concurrently; per-rate failures become NaN rows.
CapacityCurve run_sweep(const JobConfig& cfg);

// Single configured rate; failures propagate.
CapacityCurve run_capacity(const JobConfig& cfg);

std::vector<OracleRow> run_oracle(const JobConfig& cfg, const std::vector<int>& n_list);

std::vector<MmseRow> run_mmse(const JobConfig& cfg);

// JSON document: the designed sampler in config form plus its capacity.
std::string run_design(const JobConfig& cfg);

std::string curve_csv(const CapacityCurve& curve, Units units);
std::string oracle_csv(const std::vector<OracleRow>& rows, Units units);
std::string mmse_csv(const std::vector<MmseRow>& rows);

// Inverse of curve_csv for the values as written.
std::vector<CurveRow> parse_curve_csv(const std::string& text);

std::string format_double(double v);

}  // namespace sampcap::cli
