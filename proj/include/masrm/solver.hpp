#pragma once

#include <optional>
#include <vector>

#include "masrm/channel.hpp"
#include "masrm/config.hpp"
#include "masrm/precoder.hpp"
#include "masrm/secrecy.hpp"
#include "masrm/types.hpp"

namespace masrm {

struct SolverOptions {
  double epsilon1{1e-7};  // position-loop relative tolerance
  double epsilon2{1e-5};  // outer-loop relative tolerance
  int n_max{500};
  int mm_max_iter{200};
  bool optimize_positions{true};
  bool record_positions{false};
  bool record_mm_traces{false};
  BisectionConfig bisection{};

  static SolverOptions from(const SystemConfig& cfg, bool optimize_positions) {
    SolverOptions o;
    o.epsilon1 = cfg.epsilon1;
    o.epsilon2 = cfg.epsilon2;
    o.n_max = cfg.n_max;
    o.mm_max_iter = cfg.mm_max_iter;
    o.optimize_positions = optimize_positions;
    return o;
  }
};

struct SolveTrace {
  // f_values[0] is the objective at the initial point (with the auxiliaries
  // at their closed-form optima); entry n is the objective after outer
  // iteration n, evaluated with that iteration's auxiliaries and the fresh
  // precoders/positions. Non-decreasing by construction.
  std::vector<double> f_values;          // nats
  std::vector<double> sr_values;         // clamped secrecy rate, bits/s/Hz
  std::vector<double> sr_raw_values;     // unclamped rate difference
  std::vector<std::vector<Position2D>> positions_history;  // if recorded
  std::vector<std::vector<double>> mm_traces;  // per position-optimizer call
  int iterations{0};
  bool converged{false};  // stopped by the relative-change test, not n_max
  double wall_time{0.0};  // seconds
};

struct SolveResult {
  PrecoderPair precoders;
  std::vector<Position2D> positions;
  SolveTrace trace;
};

/// Random feasible starting point: antennas on the centered half-wavelength
/// grid; V and V_E with i.i.d. CN(0,1) entries (drawn column-major, V first)
/// scaled so that each carries p_max / 2.
std::pair<PrecoderPair, std::vector<Position2D>> initial_solution(
    const SystemConfig& cfg, Rng& rng);

/// Block-coordinate ascent on the reformulated objective: closed-form
/// auxiliary updates, dual-bisected precoder update, then (optionally) one
/// majorize-minimize pass over each antenna position in index order.
/// Stops when the relative objective change falls below epsilon2 or after
/// n_max iterations. `fixed_positions` pins the array (baseline mode);
/// `fixed_precoders` overrides the random precoder initialization.
SolveResult run_bcd(const SystemConfig& cfg, const LinkGeometry& geom_i,
                    const LinkGeometry& geom_e, const SolverOptions& options,
                    Rng& init_rng,
                    const std::optional<std::vector<Position2D>>& fixed_positions = {},
                    const std::optional<PrecoderPair>& fixed_precoders = {});

}  // namespace masrm
