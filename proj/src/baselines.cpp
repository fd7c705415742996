#include "masrm/baselines.hpp"

#include <algorithm>
#include <limits>
#include <string>

namespace masrm {

namespace {

double final_sr(const SolveResult& r) { return r.trace.sr_values.back(); }

// Scenario restricted to a candidate subset of size m_sub.
SystemConfig sub_config(const SystemConfig& cfg, int m_sub) {
  SystemConfig sub = cfg;
  sub.num_tx = m_sub;
  sub.num_streams = std::min(cfg.num_streams, m_sub);
  return sub;
}

SolveResult solve_fixed(const SystemConfig& cfg, const LinkGeometry& gi,
                        const LinkGeometry& ge, const SolverOptions& options,
                        std::uint64_t init_seed,
                        const std::vector<Position2D>& positions) {
  SolverOptions opts = options;
  opts.optimize_positions = false;
  Rng rng(init_seed);
  return run_bcd(sub_config(cfg, static_cast<int>(positions.size())), gi, ge, opts,
                 rng, positions);
}

}  // namespace

std::vector<Position2D> fpa_positions(int num_antennas, double wavelength) {
  return planar_grid(num_antennas, 0.5 * wavelength);
}

std::vector<Position2D> rpa_positions(int num_antennas, const TransmitRegion& region,
                                      double min_distance, Rng& rng,
                                      int max_attempts) {
  if (num_antennas < 1) throw std::invalid_argument("antenna count must be >= 1");
  if (max_attempts < 1) throw std::invalid_argument("max_attempts must be >= 1");
  if (!(region.half_width > 0.0))
    throw std::invalid_argument("region must have positive size");
  if (num_antennas >= 2 &&
      min_distance > 2.0 * std::sqrt(2.0) * region.half_width)
    throw std::invalid_argument(
        "packing infeasible: min distance exceeds the region diagonal");

  std::vector<Position2D> pts;
  for (int restart = 0; restart < 100; ++restart) {
    pts.clear();
    int consecutive_rejects = 0;
    while (static_cast<int>(pts.size()) < num_antennas &&
           consecutive_rejects < max_attempts) {
      const double x = rng.uniform(-region.half_width, region.half_width);
      const double y = rng.uniform(-region.half_width, region.half_width);
      const Position2D cand{x, y};
      bool ok = true;
      for (const auto& p : pts) ok = ok && distance(cand, p) >= min_distance;
      if (ok) {
        pts.push_back(cand);
        consecutive_rejects = 0;
      } else {
        ++consecutive_rejects;
      }
    }
    if (static_cast<int>(pts.size()) == num_antennas) return pts;
  }
  throw NumericalFailure(
      "random placement failed: packing of " + std::to_string(num_antennas) +
      " antennas at spacing " + std::to_string(min_distance) + " looks infeasible");
}

std::vector<Position2D> selection_candidates(int num_antennas, double wavelength) {
  return planar_grid(2 * num_antennas, 0.5 * wavelength);
}

SelectionResult eas_select_from(const std::vector<Position2D>& candidates,
                                const SystemConfig& cfg, const LinkGeometry& geom_i,
                                const LinkGeometry& geom_e,
                                const SolverOptions& options,
                                std::uint64_t init_seed) {
  const int n = static_cast<int>(candidates.size());
  const int m = cfg.num_tx;
  if (m > 8)
    throw std::invalid_argument(
        "exhaustive selection refused for M > 8 (subset count grows as C(2M, M))");
  if (n < m) throw std::invalid_argument("fewer candidates than antennas");

  std::vector<int> comb(m);
  for (int i = 0; i < m; ++i) comb[i] = i;

  SelectionResult best;
  double best_sr = -std::numeric_limits<double>::infinity();
  while (true) {
    std::vector<Position2D> pts;
    pts.reserve(m);
    for (int idx : comb) pts.push_back(candidates[idx]);
    SolveResult r = solve_fixed(cfg, geom_i, geom_e, options, init_seed, pts);
    if (final_sr(r) > best_sr) {
      best_sr = final_sr(r);
      best.selected = comb;
      best.solve = std::move(r);
    }
    // next lexicographic combination
    int k = m - 1;
    while (k >= 0 && comb[k] == n - m + k) --k;
    if (k < 0) break;
    ++comb[k];
    for (int i = k + 1; i < m; ++i) comb[i] = comb[i - 1] + 1;
  }
  return best;
}

SelectionResult eas_select(const SystemConfig& cfg, const LinkGeometry& geom_i,
                           const LinkGeometry& geom_e, const SolverOptions& options,
                           std::uint64_t init_seed) {
  return eas_select_from(selection_candidates(cfg.num_tx, cfg.wavelength), cfg,
                         geom_i, geom_e, options, init_seed);
}

SelectionResult gas_select_from(const std::vector<Position2D>& candidates,
                                const SystemConfig& cfg, const LinkGeometry& geom_i,
                                const LinkGeometry& geom_e,
                                const SolverOptions& options,
                                std::uint64_t init_seed, int screening_iters) {
  const int n = static_cast<int>(candidates.size());
  const int m = cfg.num_tx;
  if (n < m) throw std::invalid_argument("fewer candidates than antennas");
  if (screening_iters < 1) throw std::invalid_argument("screening_iters must be >= 1");

  SolverOptions screen = options;
  screen.n_max = screening_iters;

  std::vector<int> selected;
  std::vector<bool> taken(n, false);
  for (int step = 0; step < m; ++step) {
    int best_idx = -1;
    double best_sr = -std::numeric_limits<double>::infinity();
    for (int cand = 0; cand < n; ++cand) {
      if (taken[cand]) continue;
      std::vector<int> trial = selected;
      trial.push_back(cand);
      std::sort(trial.begin(), trial.end());
      std::vector<Position2D> pts;
      pts.reserve(trial.size());
      for (int idx : trial) pts.push_back(candidates[idx]);
      const SolveResult r =
          solve_fixed(cfg, geom_i, geom_e, screen, init_seed, pts);
      if (final_sr(r) > best_sr) {
        best_sr = final_sr(r);
        best_idx = cand;
      }
    }
    taken[best_idx] = true;
    selected.push_back(best_idx);
    std::sort(selected.begin(), selected.end());
  }

  SelectionResult res;
  res.selected = selected;
  std::vector<Position2D> pts;
  pts.reserve(m);
  for (int idx : selected) pts.push_back(candidates[idx]);
  res.solve = solve_fixed(cfg, geom_i, geom_e, options, init_seed, pts);
  return res;
}

SelectionResult gas_select(const SystemConfig& cfg, const LinkGeometry& geom_i,
                           const LinkGeometry& geom_e, const SolverOptions& options,
                           std::uint64_t init_seed, int screening_iters) {
  return gas_select_from(selection_candidates(cfg.num_tx, cfg.wavelength), cfg,
                         geom_i, geom_e, options, init_seed, screening_iters);
}

}  // namespace masrm
