#include "masrm/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

namespace masrm {

std::string scheme_name(Scheme s) {
  switch (s) {
    case Scheme::MA: return "ma";
    case Scheme::FPA: return "fpa";
    case Scheme::RPA: return "rpa";
    case Scheme::EAS: return "eas";
    case Scheme::GAS: return "gas";
  }
  throw std::logic_error("unreachable scheme");
}

std::optional<Scheme> scheme_from_name(const std::string& name) {
  if (name == "ma") return Scheme::MA;
  if (name == "fpa") return Scheme::FPA;
  if (name == "rpa") return Scheme::RPA;
  if (name == "eas") return Scheme::EAS;
  if (name == "gas") return Scheme::GAS;
  return std::nullopt;
}

SystemConfig apply_sweep(const SystemConfig& cfg, const std::string& name,
                         double value) {
  SystemConfig out = cfg;
  auto require_int = [&](const char* what) {
    if (value != std::floor(value) || value < 1.0)
      throw ConfigError(std::string(what) + " sweep values must be positive integers");
    return static_cast<int>(value);
  };
  if (name == "A") {
    if (!(value > 0.0)) throw ConfigError("A sweep values must be > 0 (wavelengths)");
    out.region_size = value * cfg.wavelength;
  } else if (name == "M") {
    out.num_tx = require_int("M");
    out.num_streams = std::min({cfg.num_streams, out.num_tx, cfg.num_rx_ir});
  } else if (name == "L") {
    out.num_paths = require_int("L");
  } else if (name == "pmax") {
    out.p_max = dbm_to_mw(value);
  } else if (name == "aod" || name == "prm") {
    if (value < 0.0) throw ConfigError(name + " sweep values must be >= 0");
    // Geometry-knowledge sweeps leave the scenario itself unchanged.
  } else {
    throw ConfigError("unknown sweep name: " + name +
                      " (expected A, M, L, pmax, aod or prm)");
  }
  out.validate();
  return out;
}

namespace {

struct Job {
  SystemConfig cfg;
  Scheme scheme{Scheme::MA};
  int trial{0};
  std::string sweep_name{"none"};
  double sweep_value{0.0};
  double mu{0.0};       // transmit-angle error bound
  double epsilon{0.0};  // path-response error variance
};

std::string sanitize(std::string s) {
  for (char& c : s)
    if (c == ',' || c == '\n' || c == '\r') c = ';';
  return s;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

void write_trace_file(const std::string& dir, const Job& job, std::uint64_t seed,
                      const SolveTrace& trace) {
  std::ostringstream name;
  name << "trace_" << scheme_name(job.scheme);
  if (job.sweep_name != "none") name << "_" << job.sweep_name << fmt(job.sweep_value);
  name << "_seed" << seed << ".csv";
  std::ofstream out(std::filesystem::path(dir) / name.str());
  if (!out) throw NumericalFailure("cannot write trace file in " + dir);
  out << "iter,f_nats,sr_bits\n";
  for (size_t i = 0; i < trace.f_values.size(); ++i)
    out << i << "," << fmt(trace.f_values[i]) << "," << fmt(trace.sr_values[i])
        << "\n";
}

TrialResult run_point(const Job& job, const RunOptions& options) {
  const SystemConfig& cfg = job.cfg;
  TrialResult res;
  res.scheme = job.scheme;
  res.seed = cfg.base_seed + static_cast<std::uint64_t>(job.trial);
  res.sweep_name = job.sweep_name;
  res.sweep_value = job.sweep_value;
  try {
    Rng geom_rng = substream(cfg.base_seed, job.trial, RngPurpose::Geometry);
    const auto [gi_true, ge_true] = sample_geometry(geom_rng, cfg.geometry());

    LinkGeometry gi = gi_true, ge = ge_true;
    if (job.mu > 0.0 || job.epsilon > 0.0) {
      Rng perturb_rng = substream(cfg.base_seed, job.trial, RngPurpose::Perturb);
      gi = perturb_geometry(gi_true, job.mu, job.epsilon, perturb_rng);
      ge = perturb_geometry(ge_true, job.mu, job.epsilon, perturb_rng);
    }

    SolverOptions sopts = options.solver;
    const std::uint64_t init_seed =
        substream_seed(cfg.base_seed, job.trial, RngPurpose::Init);
    SolveResult sol;
    switch (job.scheme) {
      case Scheme::MA: {
        sopts.optimize_positions = true;
        Rng init(init_seed);
        sol = run_bcd(cfg, gi, ge, sopts, init);
        break;
      }
      case Scheme::FPA: {
        sopts.optimize_positions = false;
        Rng init(init_seed);
        sol = run_bcd(cfg, gi, ge, sopts, init,
                      fpa_positions(cfg.num_tx, cfg.wavelength));
        break;
      }
      case Scheme::RPA: {
        sopts.optimize_positions = false;
        Rng rpa = substream(cfg.base_seed, job.trial, RngPurpose::Rpa);
        const auto pts =
            rpa_positions(cfg.num_tx, cfg.region(), cfg.min_distance, rpa);
        Rng init(init_seed);
        sol = run_bcd(cfg, gi, ge, sopts, init, pts);
        break;
      }
      case Scheme::EAS:
        sol = eas_select(cfg, gi, ge, sopts, init_seed).solve;
        break;
      case Scheme::GAS:
        sol = gas_select(cfg, gi, ge, sopts, init_seed, cfg.screening_iters).solve;
        break;
    }

    // Evaluate the delivered design against the true geometry. With perfect
    // knowledge this equals the solver's own final rate.
    const CMatrix h_i = assemble_channel(gi_true, sol.positions, cfg.wavelength);
    const CMatrix h_e = assemble_channel(ge_true, sol.positions, cfg.wavelength);
    res.sr_bits = secrecy_rate(h_i, h_e, sol.precoders, cfg.sigma2_i, cfg.sigma2_e);
    res.f_final_nats = sol.trace.f_values.back();
    res.iterations = sol.trace.iterations;
    res.wall_seconds = options.wall_clock ? sol.trace.wall_time : 0.0;
    if (!options.trace_dir.empty())
      write_trace_file(options.trace_dir, job, res.seed, sol.trace);
  } catch (const std::exception& e) {
    res.status = sanitize(std::string("failed: ") + e.what());
    res.sr_bits = 0.0;
    res.f_final_nats = 0.0;
    res.iterations = 0;
    res.wall_seconds = 0.0;
  }
  return res;
}

std::vector<TrialResult> run_jobs(std::vector<Job> jobs, const RunOptions& options) {
  if (!options.trace_dir.empty())
    std::filesystem::create_directories(options.trace_dir);
  std::vector<TrialResult> out(jobs.size());
  const int workers = std::max(1, options.parallelism);
  if (workers == 1 || jobs.size() <= 1) {
    for (size_t k = 0; k < jobs.size(); ++k) out[k] = run_point(jobs[k], options);
  } else {
    std::atomic<size_t> next{0};
    auto work = [&]() {
      for (;;) {
        const size_t k = next.fetch_add(1);
        if (k >= jobs.size()) return;
        out[k] = run_point(jobs[k], options);
      }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  std::sort(out.begin(), out.end(), [](const TrialResult& a, const TrialResult& b) {
    const std::string an = scheme_name(a.scheme), bn = scheme_name(b.scheme);
    if (an != bn) return an < bn;
    if (a.sweep_name != b.sweep_name) return a.sweep_name < b.sweep_name;
    if (a.sweep_value != b.sweep_value) return a.sweep_value < b.sweep_value;
    return a.seed < b.seed;
  });
  return out;
}

std::vector<Job> make_jobs(const SystemConfig& cfg,
                           const std::vector<Scheme>& schemes,
                           const std::string& sweep_name,
                           const std::vector<double>& grid) {
  std::vector<Job> jobs;
  for (const double value : grid) {
    const SystemConfig point_cfg = sweep_name == "none"
                                       ? cfg
                                       : apply_sweep(cfg, sweep_name, value);
    for (const Scheme scheme : schemes) {
      if (scheme == Scheme::EAS && point_cfg.num_tx > 8)
        throw ConfigError("eas scheme requires M <= 8");
      for (int t = 0; t < cfg.trials; ++t) {
        Job j;
        j.cfg = point_cfg;
        j.scheme = scheme;
        j.trial = t;
        j.sweep_name = sweep_name;
        j.sweep_value = sweep_name == "none" ? 0.0 : value;
        if (sweep_name == "aod") j.mu = value;
        if (sweep_name == "prm") j.epsilon = value;
        jobs.push_back(std::move(j));
      }
    }
  }
  return jobs;
}

}  // namespace

std::vector<TrialResult> run_trials(const SystemConfig& cfg,
                                    const std::vector<Scheme>& schemes,
                                    const std::optional<SweepSpec>& sweep,
                                    const RunOptions& options) {
  cfg.validate();
  if (schemes.empty()) throw ConfigError("no schemes requested");
  if (sweep && sweep->grid.empty()) throw ConfigError("sweep grid is empty");
  const std::string name = sweep ? sweep->name : "none";
  const std::vector<double> grid = sweep ? sweep->grid : std::vector<double>{0.0};
  return run_jobs(make_jobs(cfg, schemes, name, grid), options);
}

std::vector<TrialResult> run_fri_sweep(const SystemConfig& cfg,
                                       const std::vector<Scheme>& schemes,
                                       const std::vector<double>& mu_grid,
                                       const std::vector<double>& epsilon_grid,
                                       const RunOptions& options) {
  cfg.validate();
  std::vector<TrialResult> all;
  if (!mu_grid.empty()) {
    auto part = run_jobs(make_jobs(cfg, schemes, "aod", mu_grid), options);
    all.insert(all.end(), part.begin(), part.end());
  }
  if (!epsilon_grid.empty()) {
    auto part = run_jobs(make_jobs(cfg, schemes, "prm", epsilon_grid), options);
    all.insert(all.end(), part.begin(), part.end());
  }
  return all;
}

std::string results_to_csv(const std::vector<TrialResult>& results) {
  std::ostringstream out;
  out << "scheme,seed,sweep_name,sweep_value,sr_bits,f_final_nats,iterations,"
         "wall_seconds,status\n";
  for (const auto& r : results)
    out << scheme_name(r.scheme) << "," << r.seed << "," << r.sweep_name << ","
        << fmt(r.sweep_value) << "," << fmt(r.sr_bits) << "," << fmt(r.f_final_nats)
        << "," << r.iterations << "," << fmt(r.wall_seconds) << "," << r.status
        << "\n";
  return out.str();
}

void write_csv(const std::vector<TrialResult>& results, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot open output file: " + path);
  out << results_to_csv(results);
}

std::vector<TrialResult> read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open results file: " + path);
  std::string line;
  if (!std::getline(in, line))
    throw ConfigError("results file is empty: " + path);
  std::vector<TrialResult> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string f;
    while (std::getline(ss, f, ',')) fields.push_back(f);
    if (fields.size() != 9)
      throw ConfigError("malformed results row: " + line);
    TrialResult r;
    const auto scheme = scheme_from_name(fields[0]);
    if (!scheme) throw ConfigError("unknown scheme in results row: " + fields[0]);
    r.scheme = *scheme;
    r.seed = std::stoull(fields[1]);
    r.sweep_name = fields[2];
    r.sweep_value = std::stod(fields[3]);
    r.sr_bits = std::stod(fields[4]);
    r.f_final_nats = std::stod(fields[5]);
    r.iterations = std::stoi(fields[6]);
    r.wall_seconds = std::stod(fields[7]);
    r.status = fields[8];
    out.push_back(std::move(r));
  }
  return out;
}

double failure_fraction(const std::vector<TrialResult>& results) {
  if (results.empty()) return 0.0;
  size_t bad = 0;
  for (const auto& r : results)
    if (!r.ok()) ++bad;
  return static_cast<double>(bad) / static_cast<double>(results.size());
}

}  // namespace masrm
