#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <sstream>

#include "sampcap_cli/jobs.hpp"

namespace {

using namespace sampcap;
using namespace sampcap::cli;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(path + ": cannot open config");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void emit(const std::string& text, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << text << std::flush;
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError(path + ": cannot open output");
  out << text;
  if (!out.flush()) throw ConfigError(path + ": write failed");
}

struct Options {
  std::string config;
  std::string units;
  std::string out;
  std::vector<int> n;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Capacity of sampled Gaussian channels"};
  app.require_subcommand(1);
  Options opt;

  const char* names[] = {"capacity", "design", "sweep", "mmse", "oracle"};
  const char* help[] = {"capacity at the configured sampling rate",
                        "optimal sampler for the configured rate, as JSON",
                        "capacity curve over the configured rates",
                        "Wiener reconstruction error per rate",
                        "finite-horizon convergence table"};
  for (int i = 0; i < 5; ++i) {
    CLI::App* sub = app.add_subcommand(names[i], help[i]);
    sub->add_option("config", opt.config, "JSON job file")->required();
    sub->add_option("--units", opt.units, "nats or bits")->check(CLI::IsMember({"nats", "bits"}));
    sub->add_option("--out", opt.out, "output path (default stdout)");
    if (std::string(names[i]) == "oracle")
      sub->add_option("--n", opt.n, "comma-separated horizons")->delimiter(',');
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    JobConfig cfg = parse_config(read_file(opt.config));
    if (opt.units == "bits") cfg.units = Units::bits;
    if (opt.units == "nats") cfg.units = Units::nats;
    const std::string out = opt.out.empty() ? cfg.output : opt.out;

    const std::string cmd = app.get_subcommands().front()->get_name();
    if (cmd == "capacity") {
      emit(curve_csv(run_capacity(cfg), cfg.units), out);
    } else if (cmd == "sweep") {
      emit(curve_csv(run_sweep(cfg), cfg.units), out);
    } else if (cmd == "design") {
      emit(run_design(cfg), out);
    } else if (cmd == "mmse") {
      emit(mmse_csv(run_mmse(cfg)), out);
    } else {
      emit(oracle_csv(run_oracle(cfg, opt.n.empty() ? cfg.oracle_n : opt.n), cfg.units), out);
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const NumericError& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
