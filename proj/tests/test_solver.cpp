#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <vector>

#include "masrm/baselines.hpp"
#include "masrm/solver.hpp"
#include "test_support.hpp"

using namespace masrm;
using namespace masrm::testing;

namespace {

std::pair<LinkGeometry, LinkGeometry> draw_links(const SystemConfig& cfg,
                                                 std::uint64_t seed) {
  Rng rng(seed);
  return sample_geometry(rng, cfg.geometry());
}

double monotone_tol(double f) { return 1e-9 * (1.0 + std::abs(f)); }

}  // namespace

TEST_CASE("initial solution is feasible, splits power evenly, and is reproducible") {
  SystemConfig cfg;
  Rng rng_a(5), rng_b(5), rng_c(6);
  const auto [p_a, pos_a] = initial_solution(cfg, rng_a);
  const auto [p_b, pos_b] = initial_solution(cfg, rng_b);
  const auto [p_c, pos_c] = initial_solution(cfg, rng_c);

  CHECK_NOTHROW(validate_positions(pos_a, cfg.region(), cfg.min_distance));
  const std::vector<Position2D> grid = planar_grid(cfg.num_tx, 0.5 * cfg.wavelength);
  REQUIRE(pos_a.size() == grid.size());
  for (size_t i = 0; i < grid.size(); ++i) {
    CHECK(pos_a[i].x == grid[i].x);
    CHECK(pos_a[i].y == grid[i].y);
  }

  CHECK(p_a.v.squaredNorm() == doctest::Approx(0.5 * cfg.p_max).epsilon(1e-12));
  CHECK(p_a.v_e.squaredNorm() == doctest::Approx(0.5 * cfg.p_max).epsilon(1e-12));
  CHECK(p_a.v.rows() == cfg.num_tx);
  CHECK(p_a.v.cols() == cfg.num_streams);
  CHECK(p_a.v_e.cols() == cfg.num_tx);

  CHECK((p_a.v - p_b.v).norm() == 0.0);
  CHECK((p_a.v_e - p_b.v_e).norm() == 0.0);
  CHECK((p_a.v - p_c.v).norm() > 0.0);
}

TEST_CASE("objective trace ascends monotonically and rates match the trace") {
  SystemConfig cfg;
  cfg.num_streams = 4;
  int converged = 0;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto [geom_i, geom_e] = draw_links(cfg, seed);
    Rng init(seed * 977);
    const SolveResult res =
        run_bcd(cfg, geom_i, geom_e, SolverOptions::from(cfg, true), init);
    const SolveTrace& tr = res.trace;
    REQUIRE(tr.f_values.size() >= 2);
    REQUIRE(tr.sr_values.size() == tr.f_values.size());
    REQUIRE(tr.sr_raw_values.size() == tr.f_values.size());
    CHECK(tr.iterations == static_cast<int>(tr.f_values.size()) - 1);
    for (size_t i = 1; i < tr.f_values.size(); ++i)
      CHECK(tr.f_values[i] >= tr.f_values[i - 1] - monotone_tol(tr.f_values[i - 1]));
    for (size_t i = 0; i < tr.sr_values.size(); ++i) {
      CHECK(tr.sr_values[i] >= 0.0);
      CHECK(tr.sr_values[i] == std::max(0.0, tr.sr_raw_values[i]));
    }
    if (tr.converged) ++converged;

    // Returned state reproduces the last recorded rate.
    const CMatrix h_i = assemble_channel(geom_i, res.positions, cfg.wavelength);
    const CMatrix h_e = assemble_channel(geom_e, res.positions, cfg.wavelength);
    const double sr =
        secrecy_rate(h_i, h_e, res.precoders, cfg.sigma2_i, cfg.sigma2_e);
    CHECK(std::abs(sr - tr.sr_values.back()) <= 1e-8 * (1.0 + sr));
    CHECK(res.precoders.power() <= cfg.p_max * (1.0 + 1e-9));
    CHECK_NOTHROW(validate_positions(res.positions, cfg.region(), cfg.min_distance));
  }
  CHECK(converged >= 4);  // the default budget is ample for typical draws
}

TEST_CASE("all-zero precoders are a stationary point, random initials escape zero") {
  SystemConfig cfg;
  cfg.n_max = 10;
  const auto [geom_i, geom_e] = draw_links(cfg, 42);

  PrecoderPair zero;
  zero.v = CMatrix::Zero(cfg.num_tx, cfg.num_streams);
  zero.v_e = CMatrix::Zero(cfg.num_tx, cfg.num_tx);
  Rng init(7);
  const SolveResult res = run_bcd(cfg, geom_i, geom_e,
                                  SolverOptions::from(cfg, true), init,
                                  std::nullopt, zero);
  for (const double f : res.trace.f_values) CHECK(std::abs(f) <= 1e-12);
  for (const double sr : res.trace.sr_values) CHECK(sr == 0.0);
  CHECK(res.trace.converged);
  CHECK(res.precoders.power() == 0.0);
  const std::vector<Position2D> grid = planar_grid(cfg.num_tx, 0.5 * cfg.wavelength);
  for (size_t i = 0; i < grid.size(); ++i) {
    CHECK(res.positions[i].x == grid[i].x);  // nothing moves without a signal
    CHECK(res.positions[i].y == grid[i].y);
  }

  // The same geometry with a random start makes strict progress.
  int improved = 0;
  for (std::uint64_t s = 1; s <= 3; ++s) {
    Rng r(s);
    const SolveResult live =
        run_bcd(cfg, geom_i, geom_e, SolverOptions::from(cfg, true), r);
    if (live.trace.f_values.back() > live.trace.f_values.front() + 1e-3) ++improved;
    CHECK(live.trace.f_values.back() >=
          live.trace.f_values.front() - monotone_tol(live.trace.f_values.front()));
  }
  CHECK(improved >= 1);
}

TEST_CASE("fixed positions stay fixed and fixed precoders are validated") {
  SystemConfig cfg;
  cfg.n_max = 40;
  const auto [geom_i, geom_e] = draw_links(cfg, 3);
  const std::vector<Position2D> fixed = fpa_positions(cfg.num_tx, cfg.wavelength);

  Rng init(11);
  const SolveResult res = run_bcd(cfg, geom_i, geom_e,
                                  SolverOptions::from(cfg, false), init, fixed);
  REQUIRE(res.positions.size() == fixed.size());
  for (size_t i = 0; i < fixed.size(); ++i) {
    CHECK(res.positions[i].x == fixed[i].x);
    CHECK(res.positions[i].y == fixed[i].y);
  }
  for (size_t i = 1; i < res.trace.f_values.size(); ++i)
    CHECK(res.trace.f_values[i] >=
          res.trace.f_values[i - 1] - monotone_tol(res.trace.f_values[i - 1]));

  Rng init2(11);
  PrecoderPair over = random_precoders(cfg.num_tx, cfg.num_streams,
                                       1.05 * cfg.p_max, init2);
  CHECK_THROWS_AS(run_bcd(cfg, geom_i, geom_e, SolverOptions::from(cfg, false),
                          init2, std::nullopt, over),
                  std::invalid_argument);

  PrecoderPair wrong_rows = random_precoders(cfg.num_tx + 1, cfg.num_streams,
                                             cfg.p_max, init2);
  CHECK_THROWS_AS(run_bcd(cfg, geom_i, geom_e, SolverOptions::from(cfg, false),
                          init2, std::nullopt, wrong_rows),
                  std::invalid_argument);

  std::vector<Position2D> bad_count(cfg.num_tx - 1, Position2D{0.0, 0.0});
  CHECK_THROWS_AS(run_bcd(cfg, geom_i, geom_e, SolverOptions::from(cfg, false),
                          init2, bad_count),
                  std::invalid_argument);

  std::vector<Position2D> overlapping(cfg.num_tx, Position2D{0.0, 0.0});
  CHECK_THROWS_AS(run_bcd(cfg, geom_i, geom_e, SolverOptions::from(cfg, false),
                          init2, overlapping),
                  std::invalid_argument);
}

TEST_CASE("mismatched geometry is rejected") {
  SystemConfig cfg;
  const auto [geom_i, geom_e] = draw_links(cfg, 8);
  SystemConfig wrong = cfg;
  wrong.num_rx_ir = 3;
  wrong.num_streams = 3;
  Rng init(1);
  CHECK_THROWS_AS(
      run_bcd(wrong, geom_i, geom_e, SolverOptions::from(wrong, true), init),
      std::invalid_argument);
}

TEST_CASE("identical seeds give bitwise identical runs") {
  SystemConfig cfg;
  cfg.n_max = 30;
  const auto [geom_i, geom_e] = draw_links(cfg, 12);
  SolverOptions opt = SolverOptions::from(cfg, true);
  opt.record_positions = true;
  Rng a(99), b(99);
  const SolveResult ra = run_bcd(cfg, geom_i, geom_e, opt, a);
  const SolveResult rb = run_bcd(cfg, geom_i, geom_e, opt, b);
  REQUIRE(ra.trace.f_values.size() == rb.trace.f_values.size());
  for (size_t i = 0; i < ra.trace.f_values.size(); ++i)
    CHECK(ra.trace.f_values[i] == rb.trace.f_values[i]);
  REQUIRE(ra.positions.size() == rb.positions.size());
  for (size_t i = 0; i < ra.positions.size(); ++i) {
    CHECK(ra.positions[i].x == rb.positions[i].x);
    CHECK(ra.positions[i].y == rb.positions[i].y);
  }
  CHECK((ra.precoders.v - rb.precoders.v).norm() == 0.0);
  CHECK((ra.precoders.v_e - rb.precoders.v_e).norm() == 0.0);
}

TEST_CASE("per-call majorize-minimize traces descend when recorded") {
  SystemConfig cfg;
  cfg.n_max = 15;
  const auto [geom_i, geom_e] = draw_links(cfg, 21);
  SolverOptions opt = SolverOptions::from(cfg, true);
  opt.record_mm_traces = true;
  Rng init(4);
  const SolveResult res = run_bcd(cfg, geom_i, geom_e, opt, init);
  REQUIRE(!res.trace.mm_traces.empty());
  CHECK(res.trace.mm_traces.size() ==
        static_cast<size_t>(res.trace.iterations) * cfg.num_tx);
  for (const auto& trace : res.trace.mm_traces) {
    REQUIRE(trace.size() >= 2);
    for (size_t i = 1; i < trace.size(); ++i)
      CHECK(trace[i] <= trace[i - 1] + 1e-9 * (1.0 + std::abs(trace[i - 1])));
  }
}
