#pragma once

#include <vector>

#include "masrm/solver.hpp"

namespace masrm {

/// Fixed planar array: centered half-wavelength grid, as square as the
/// antenna count allows.
std::vector<Position2D> fpa_positions(int num_antennas, double wavelength);

/// Random placement by dart throwing: uniform draws over the region,
/// rejecting points closer than min_distance to an accepted one. After
/// max_attempts consecutive rejections the sample is restarted; after 100
/// restarts the packing is declared infeasible.
std::vector<Position2D> rpa_positions(int num_antennas, const TransmitRegion& region,
                                      double min_distance, Rng& rng,
                                      int max_attempts = 1000);

/// Half-wavelength candidate grid with 2M ports for the selection schemes.
std::vector<Position2D> selection_candidates(int num_antennas, double wavelength);

struct SelectionResult {
  std::vector<int> selected;  // candidate indices, ascending
  SolveResult solve;
};

/// Exhaustive antenna selection: solves the fixed-position problem for every
/// M-subset of `candidates` and keeps the best final secrecy rate (ties to
/// the lexicographically first subset). Every candidate solve starts from
/// the same precoder draw (seeded by init_seed) so subsets are compared
/// fairly. Refuses num_tx > 8 (70+ subsets per extra antenna grow as C(2M, M)).
SelectionResult eas_select_from(const std::vector<Position2D>& candidates,
                                const SystemConfig& cfg, const LinkGeometry& geom_i,
                                const LinkGeometry& geom_e,
                                const SolverOptions& options,
                                std::uint64_t init_seed);
SelectionResult eas_select(const SystemConfig& cfg, const LinkGeometry& geom_i,
                           const LinkGeometry& geom_e, const SolverOptions& options,
                           std::uint64_t init_seed);

/// Greedy antenna selection: grows the set one port at a time, scoring each
/// candidate with a truncated solve (screening_iters outer iterations), then
/// re-solves the winning set to full convergence. Partial sets of size M'
/// run with min(d, M') streams.
SelectionResult gas_select_from(const std::vector<Position2D>& candidates,
                                const SystemConfig& cfg, const LinkGeometry& geom_i,
                                const LinkGeometry& geom_e,
                                const SolverOptions& options,
                                std::uint64_t init_seed, int screening_iters);
SelectionResult gas_select(const SystemConfig& cfg, const LinkGeometry& geom_i,
                           const LinkGeometry& geom_e, const SolverOptions& options,
                           std::uint64_t init_seed, int screening_iters = 30);

}  // namespace masrm
