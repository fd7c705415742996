#pragma once

#include <optional>
#include <string>
#include <vector>

#include "masrm/baselines.hpp"
#include "masrm/config.hpp"
#include "masrm/solver.hpp"

namespace masrm {

enum class Scheme { MA, FPA, RPA, EAS, GAS };

std::string scheme_name(Scheme s);
std::optional<Scheme> scheme_from_name(const std::string& name);

/// Parameter sweep. Grid-value units by name:
///   A    - region size in wavelengths
///   M    - transmit antenna count
///   L    - paths per link
///   pmax - power budget in dBm
///   aod  - transmit-angle error bound mu, radians
///   prm  - path-response relative error variance epsilon (linear)
struct SweepSpec {
  std::string name;
  std::vector<double> grid;
};

/// Returns cfg with one sweep point applied; for the "aod"/"prm" sweeps the
/// config is unchanged and the value is routed to perturb_geometry instead.
SystemConfig apply_sweep(const SystemConfig& cfg, const std::string& name,
                         double value);

struct TrialResult {
  Scheme scheme{Scheme::MA};
  std::uint64_t seed{0};
  std::string sweep_name;  // "none" when not sweeping
  double sweep_value{0.0};
  double sr_bits{0.0};       // evaluated against the true geometry
  double f_final_nats{0.0};  // solver objective (against its channel estimate)
  int iterations{0};
  double wall_seconds{0.0};
  std::string status{"ok"};  // "ok" or an error description

  bool ok() const { return status == "ok"; }
};

struct RunOptions {
  int parallelism{1};
  std::string trace_dir;    // per-trial iteration traces when non-empty
  bool wall_clock{false};   // keep measured times (makes CSV non-reproducible)
  SolverOptions solver;

  static RunOptions from(const SystemConfig& cfg) {
    RunOptions o;
    o.solver = SolverOptions::from(cfg, true);
    return o;
  }
};

/// Runs `cfg.trials` paired trials of each scheme at each sweep point.
/// Trial t draws its geometry from substream(base_seed, t, Geometry), so all
/// schemes and sweep points with compatible dimensions see identical
/// channels. Per-trial failures are recorded in `status`, not thrown.
/// Results are ordered by (scheme name, sweep_value, seed) regardless of
/// parallelism.
std::vector<TrialResult> run_trials(const SystemConfig& cfg,
                                    const std::vector<Scheme>& schemes,
                                    const std::optional<SweepSpec>& sweep,
                                    const RunOptions& options);

/// Imperfect-channel-knowledge study: for each mu in mu_grid runs an "aod"
/// sweep point, then for each epsilon in epsilon_grid a "prm" sweep point.
/// Optimization uses the perturbed geometry; sr_bits is re-evaluated against
/// the true one (f_final_nats stays the optimizer's own objective).
std::vector<TrialResult> run_fri_sweep(const SystemConfig& cfg,
                                       const std::vector<Scheme>& schemes,
                                       const std::vector<double>& mu_grid,
                                       const std::vector<double>& epsilon_grid,
                                       const RunOptions& options);

/// CSV with header scheme,seed,sweep_name,sweep_value,sr_bits,f_final_nats,
/// iterations,wall_seconds,status; floats carry 12 significant digits.
std::string results_to_csv(const std::vector<TrialResult>& results);
void write_csv(const std::vector<TrialResult>& results, const std::string& path);
std::vector<TrialResult> read_csv(const std::string& path);

/// Share of rows whose status is not "ok" (0 for an empty list).
double failure_fraction(const std::vector<TrialResult>& results);

}  // namespace masrm
