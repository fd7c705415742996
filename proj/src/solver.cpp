#include "masrm/solver.hpp"

#include <chrono>

#include "masrm/positioner.hpp"

namespace masrm {

namespace {

CMatrix random_gaussian(int rows, int cols, Rng& rng) {
  CMatrix m(rows, cols);
  for (int c = 0; c < cols; ++c)
    for (int r = 0; r < rows; ++r) m(r, c) = rng.complex_normal(1.0);
  return m;
}

void scale_to_power(CMatrix& m, double target) {
  const double tr = m.squaredNorm();
  if (!(tr > 0.0)) throw NumericalFailure("degenerate zero draw in initialization");
  m *= std::sqrt(target / tr);
}

}  // namespace

std::pair<PrecoderPair, std::vector<Position2D>> initial_solution(
    const SystemConfig& cfg, Rng& rng) {
  std::vector<Position2D> positions = planar_grid(cfg.num_tx, 0.5 * cfg.wavelength);
  validate_positions(positions, cfg.region(), cfg.min_distance);
  PrecoderPair p;
  p.v = random_gaussian(cfg.num_tx, cfg.num_streams, rng);
  p.v_e = random_gaussian(cfg.num_tx, cfg.num_tx, rng);
  scale_to_power(p.v, 0.5 * cfg.p_max);
  scale_to_power(p.v_e, 0.5 * cfg.p_max);
  return {std::move(p), std::move(positions)};
}

SolveResult run_bcd(const SystemConfig& cfg, const LinkGeometry& geom_i,
                    const LinkGeometry& geom_e, const SolverOptions& options,
                    Rng& init_rng,
                    const std::optional<std::vector<Position2D>>& fixed_positions,
                    const std::optional<PrecoderPair>& fixed_precoders) {
  const auto t_start = std::chrono::steady_clock::now();
  geom_i.validate();
  geom_e.validate();
  if (geom_i.num_rx_antennas() != cfg.num_rx_ir ||
      geom_e.num_rx_antennas() != cfg.num_rx_eve)
    throw std::invalid_argument("geometry antenna counts do not match the config");

  SolveResult res;
  {
    auto [p, pos] = initial_solution(cfg, init_rng);
    res.precoders = std::move(p);
    res.positions = std::move(pos);
  }
  if (fixed_positions) {
    if (static_cast<int>(fixed_positions->size()) != cfg.num_tx)
      throw std::invalid_argument("fixed position count does not match system.M");
    validate_positions(*fixed_positions, cfg.region(), cfg.min_distance);
    res.positions = *fixed_positions;
  }
  if (fixed_precoders) {
    if (fixed_precoders->v.rows() != cfg.num_tx ||
        fixed_precoders->v_e.rows() != cfg.num_tx)
      throw std::invalid_argument("fixed precoder shape does not match system.M");
    if (fixed_precoders->power() > cfg.p_max * (1.0 + 1e-9))
      throw std::invalid_argument("fixed precoders exceed the power budget");
    res.precoders = *fixed_precoders;
  }

  CMatrix h_i = assemble_channel(geom_i, res.positions, cfg.wavelength);
  CMatrix h_e = assemble_channel(geom_e, res.positions, cfg.wavelength);

  SolveTrace& trace = res.trace;
  auto record_rates = [&]() {
    const double raw =
        secrecy_rate_raw(h_i, h_e, res.precoders, cfg.sigma2_i, cfg.sigma2_e);
    trace.sr_raw_values.push_back(raw);
    trace.sr_values.push_back(std::max(0.0, raw));
    if (options.record_positions) trace.positions_history.push_back(res.positions);
  };

  {
    const AuxiliarySet aux0 = optimal_auxiliaries(h_i, h_e, res.precoders,
                                                  cfg.sigma2_i, cfg.sigma2_e);
    trace.f_values.push_back(
        objective_f(aux0, res.precoders, h_i, h_e, cfg.sigma2_i, cfg.sigma2_e));
  }
  record_rates();

  double f_prev = trace.f_values.back();
  const TransmitRegion region = cfg.region();

  for (int n = 1; n <= options.n_max; ++n) {
    const AuxiliarySet aux = optimal_auxiliaries(h_i, h_e, res.precoders,
                                                 cfg.sigma2_i, cfg.sigma2_e);
    res.precoders = solve_precoders(aux, h_i, h_e, cfg.sigma2_e, cfg.p_max,
                                    options.bisection)
                        .pair;

    if (options.optimize_positions) {
      for (int m = 0; m < cfg.num_tx; ++m) {
        // Gauss-Seidel: coefficients see the already-updated positions.
        const DecoupledCoefficients coeffs =
            decouple(m, res.positions, res.precoders, aux, geom_i, geom_e,
                     cfg.sigma2_e, cfg.wavelength);
        std::vector<Position2D> others;
        others.reserve(cfg.num_tx - 1);
        for (int i = 0; i < cfg.num_tx; ++i)
          if (i != m) others.push_back(res.positions[i]);
        const PositionOptResult opt = optimize_position(
            coeffs, res.positions[m], geom_i, geom_e, cfg.wavelength, region,
            others, cfg.min_distance, options.epsilon1, options.mm_max_iter);
        res.positions[m] = opt.position;
        if (options.record_mm_traces) trace.mm_traces.push_back(opt.objective_trace);
      }
      h_i = assemble_channel(geom_i, res.positions, cfg.wavelength);
      h_e = assemble_channel(geom_e, res.positions, cfg.wavelength);
    }

    const double f_new =
        objective_f(aux, res.precoders, h_i, h_e, cfg.sigma2_i, cfg.sigma2_e);
    trace.f_values.push_back(f_new);
    record_rates();
    trace.iterations = n;

    const double scale = std::abs(f_new) < 1e-12 ? 1.0 : std::abs(f_new);
    if (std::abs(f_new - f_prev) <= options.epsilon2 * scale) {
      trace.converged = true;
      f_prev = f_new;
      break;
    }
    f_prev = f_new;
  }

  trace.wall_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start)
          .count();
  return res;
}

}  // namespace masrm
