// Command-line front end: runs Monte Carlo trials of the movable-antenna
// secrecy-rate solver and its baselines, optionally over a parameter sweep,
// and writes one CSV row per trial.

#include <cstdio>
#include <iostream>
#include <map>
#include <numeric>
#include <sstream>

#include <CLI11.hpp>

#include "masrm/harness.hpp"

namespace {

std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(item);
  return out;
}

void print_summary(const std::vector<masrm::TrialResult>& results) {
  // mean secrecy rate per (scheme, sweep point), failures excluded
  std::map<std::pair<std::string, double>, std::pair<double, int>> acc;
  for (const auto& r : results) {
    if (!r.ok()) continue;
    auto& slot = acc[{masrm::scheme_name(r.scheme), r.sweep_value}];
    slot.first += r.sr_bits;
    slot.second += 1;
  }
  for (const auto& [key, slot] : acc)
    std::fprintf(stderr, "%-4s sweep_value=%-10g mean_sr=%.4f bits/s/Hz (%d trials)\n",
                 key.first.c_str(), key.second, slot.first / slot.second, slot.second);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Secrecy-rate maximization for a MIMO wiretap channel with movable "
      "transmit antennas"};

  std::string config_path;
  std::string scheme_arg = "ma";
  std::string sweep_name;
  std::string grid_arg;
  std::string out_path = "results.csv";
  std::string trace_dir;
  int trials = -1;
  std::int64_t seed = -1;
  int parallel = 1;
  bool wall_clock = false;

  app.add_option("--config", config_path, "scenario config file")->required();
  app.add_option("--scheme", scheme_arg,
                 "comma-separated subset of ma,fpa,rpa,eas,gas (default ma)");
  app.add_option("--trials", trials, "override run.trials");
  app.add_option("--seed", seed, "override run.base_seed");
  app.add_option("--sweep", sweep_name,
                 "sweep parameter: A (wavelengths), M, L, pmax (dBm), aod (radians), "
                 "prm (error variance)");
  app.add_option("--grid", grid_arg, "comma-separated sweep values");
  app.add_option("--out", out_path, "output CSV path (default results.csv)");
  app.add_option("--parallel", parallel, "worker threads (default 1)");
  app.add_option("--trace-dir", trace_dir, "write per-trial iteration traces here");
  app.add_flag("--wall-clock", wall_clock,
               "record measured wall_seconds (makes the CSV non-reproducible)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    masrm::SystemConfig cfg = masrm::parse_config_file(config_path);
    if (trials >= 0) cfg.trials = trials;
    if (seed >= 0) cfg.base_seed = static_cast<std::uint64_t>(seed);
    cfg.validate();

    std::vector<masrm::Scheme> schemes;
    for (const auto& name : split_commas(scheme_arg)) {
      const auto s = masrm::scheme_from_name(name);
      if (!s) throw masrm::ConfigError("unknown scheme: " + name);
      schemes.push_back(*s);
    }

    std::optional<masrm::SweepSpec> sweep;
    if (!sweep_name.empty() || !grid_arg.empty()) {
      if (sweep_name.empty() || grid_arg.empty())
        throw masrm::ConfigError("--sweep and --grid must be given together");
      masrm::SweepSpec spec;
      spec.name = sweep_name;
      for (const auto& v : split_commas(grid_arg)) {
        try {
          spec.grid.push_back(std::stod(v));
        } catch (const std::exception&) {
          throw masrm::ConfigError("bad sweep value: " + v);
        }
      }
      // Fail early on a bad sweep spec rather than per trial.
      for (const double v : spec.grid) masrm::apply_sweep(cfg, spec.name, v);
      sweep = std::move(spec);
    }

    if (parallel < 1) throw masrm::ConfigError("--parallel must be >= 1");

    masrm::RunOptions options = masrm::RunOptions::from(cfg);
    options.parallelism = parallel;
    options.trace_dir = trace_dir;
    options.wall_clock = wall_clock;

    const auto results = masrm::run_trials(cfg, schemes, sweep, options);
    masrm::write_csv(results, out_path);
    print_summary(results);

    const double failed = masrm::failure_fraction(results);
    if (failed > 0.10) {
      std::fprintf(stderr, "error: %.1f%% of trials failed\n", 100.0 * failed);
      return 3;
    }
    return 0;
  } catch (const masrm::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
