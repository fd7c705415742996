#include "masrm/positioner.hpp"

namespace masrm {

namespace {

CMatrix symmetrize(const CMatrix& m) { return 0.5 * (m + m.adjoint()); }

double max_eig_hermitian(const CMatrix& m) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(m, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success)
    throw NumericalFailure("eigendecomposition failed on a position kernel");
  return es.eigenvalues().maxCoeff();
}

// Accumulates value/gradient/Hessian contributions of one link's
// 2 sum_j |eta_j| cos(kappa_j(t)) term.
struct TrigAccumulator {
  double k0;
  double value{0.0};
  Eigen::Vector2d grad{0.0, 0.0};
  Eigen::Matrix2d hess = Eigen::Matrix2d::Zero();

  void add(const CVector& eta, const LinkGeometry& g, Position2D t) {
    for (Eigen::Index j = 0; j < eta.size(); ++j) {
      const double mag = std::abs(eta[j]);
      if (mag == 0.0) continue;
      const double sx = std::sin(g.theta_t[j]) * std::cos(g.phi_t[j]);
      const double sy = std::cos(g.theta_t[j]);
      const double kappa = k0 * (t.x * sx + t.y * sy) - std::arg(eta[j]);
      const double c = std::cos(kappa), s = std::sin(kappa);
      value += 2.0 * mag * c;
      grad.x() += -2.0 * k0 * mag * sx * s;
      grad.y() += -2.0 * k0 * mag * sy * s;
      hess(0, 0) += -2.0 * k0 * k0 * mag * sx * sx * c;
      hess(0, 1) += -2.0 * k0 * k0 * mag * sx * sy * c;
      hess(1, 1) += -2.0 * k0 * k0 * mag * sy * sy * c;
    }
    hess(1, 0) = hess(0, 1);
  }
};

}  // namespace

DecoupledCoefficients decouple(int m, const std::vector<Position2D>& positions,
                               const PrecoderPair& p, const AuxiliarySet& aux,
                               const LinkGeometry& geom_i, const LinkGeometry& geom_e,
                               double sigma2_e, double wavelength) {
  const int big_m = static_cast<int>(positions.size());
  if (m < 0 || m >= big_m) throw std::invalid_argument("antenna index out of range");
  if (p.v.rows() != big_m || p.v_e.rows() != big_m)
    throw std::invalid_argument("precoder row count does not match antenna count");

  DecoupledCoefficients c;
  c.antenna = m;

  const CMatrix p_i = geom_i.prm.adjoint() * receive_frm(geom_i, wavelength);
  const CMatrix p_e = geom_e.prm.adjoint() * receive_frm(geom_e, wavelength);
  const CMatrix piuw = p_i * aux.u_i * aux.w_i;  // tx_paths_I x d
  const CMatrix peuw = p_e * aux.u_e * aux.w_e;  // tx_paths_E x M

  c.a_i_cols = piuw * p.v.adjoint();
  c.a_e_cols = peuw * p.v_e.adjoint();
  c.c_i = symmetrize(piuw * (p_i * aux.u_i).adjoint());
  c.c_x = symmetrize((p_e * aux.w_x * p_e.adjoint()) / sigma2_e);
  c.c_e = symmetrize(peuw * (p_e * aux.u_e).adjoint());

  c.q_x_rows.resize(big_m, p.v.cols() + p.v_e.cols());
  c.q_x_rows << p.v, p.v_e;
  c.q_e_rows = p.v_e;

  const double qx_m = c.q_x_rows.row(m).squaredNorm();
  const double qe_m = c.q_e_rows.row(m).squaredNorm();
  c.b_i = qx_m * c.c_i;
  c.b_e = qx_m * c.c_x + qe_m * c.c_e;

  // Cross terms against the other antennas: sum_{i != m} g_k(t_i) q_i^H.
  const CMatrix g_i = transmit_frm(positions, geom_i, wavelength);
  const CMatrix g_e = transmit_frm(positions, geom_e, wavelength);
  const CMatrix cross_xi =
      g_i * c.q_x_rows - g_i.col(m) * c.q_x_rows.row(m);
  const CMatrix cross_xe =
      g_e * c.q_x_rows - g_e.col(m) * c.q_x_rows.row(m);
  const CMatrix cross_ee =
      g_e * c.q_e_rows - g_e.col(m) * c.q_e_rows.row(m);

  c.d_i = c.c_i * (cross_xi * c.q_x_rows.row(m).adjoint()) - c.a_i_cols.col(m);
  c.d_e = c.c_x * (cross_xe * c.q_x_rows.row(m).adjoint()) +
          c.c_e * (cross_ee * c.q_e_rows.row(m).adjoint()) - c.a_e_cols.col(m);
  return c;
}

double position_objective(const DecoupledCoefficients& c, Position2D t,
                          const LinkGeometry& geom_i, const LinkGeometry& geom_e,
                          double wavelength) {
  const CVector gi = transmit_frv(t, geom_i, wavelength);
  const CVector ge = transmit_frv(t, geom_e, wavelength);
  return gi.dot(c.b_i * gi).real() + ge.dot(c.b_e * ge).real() +
         2.0 * gi.dot(c.d_i).real() + 2.0 * ge.dot(c.d_e).real();
}

SurrogateState surrogate_eta(const DecoupledCoefficients& c, Position2D t_current,
                             const LinkGeometry& geom_i, const LinkGeometry& geom_e,
                             double wavelength) {
  SurrogateState s;
  s.lambda_max_i = max_eig_hermitian(c.b_i);
  s.lambda_max_e = max_eig_hermitian(c.b_e);
  const CVector gi = transmit_frv(t_current, geom_i, wavelength);
  const CVector ge = transmit_frv(t_current, geom_e, wavelength);
  const Eigen::Index li = c.b_i.rows(), le = c.b_e.rows();
  s.eta_i = c.d_i - (s.lambda_max_i * CMatrix::Identity(li, li) - c.b_i) * gi;
  s.eta_e = c.d_e - (s.lambda_max_e * CMatrix::Identity(le, le) - c.b_e) * ge;
  const double k0 = 2.0 * M_PI / wavelength;
  s.delta = 4.0 * k0 * k0 *
            (s.eta_i.cwiseAbs().sum() + s.eta_e.cwiseAbs().sum());
  return s;
}

double gamma_value(const SurrogateState& s, Position2D t, const LinkGeometry& geom_i,
                   const LinkGeometry& geom_e, double wavelength) {
  TrigAccumulator acc{2.0 * M_PI / wavelength};
  acc.add(s.eta_i, geom_i, t);
  acc.add(s.eta_e, geom_e, t);
  return acc.value;
}

Eigen::Vector2d gamma_gradient(const SurrogateState& s, Position2D t,
                               const LinkGeometry& geom_i, const LinkGeometry& geom_e,
                               double wavelength) {
  TrigAccumulator acc{2.0 * M_PI / wavelength};
  acc.add(s.eta_i, geom_i, t);
  acc.add(s.eta_e, geom_e, t);
  return acc.grad;
}

Eigen::Matrix2d gamma_hessian(const SurrogateState& s, Position2D t,
                              const LinkGeometry& geom_i, const LinkGeometry& geom_e,
                              double wavelength) {
  TrigAccumulator acc{2.0 * M_PI / wavelength};
  acc.add(s.eta_i, geom_i, t);
  acc.add(s.eta_e, geom_e, t);
  return acc.hess;
}

MmStepResult mm_step(const SurrogateState& s, Position2D t_current,
                     const LinkGeometry& geom_i, const LinkGeometry& geom_e,
                     double wavelength, const TransmitRegion& region,
                     const std::vector<Position2D>& others, double min_distance) {
  if (!region.contains(t_current, 1e-12))
    throw std::invalid_argument("mm_step: current position is outside the region");
  if (s.delta <= 0.0) return {t_current, false, false};

  const Eigen::Vector2d grad =
      gamma_gradient(s, t_current, geom_i, geom_e, wavelength);
  const Position2D cand{t_current.x - grad.x() / s.delta,
                        t_current.y - grad.y() / s.delta};

  bool ok = region.contains(cand);
  for (const auto& o : others)
    ok = ok && distance(cand, o) >= min_distance;
  if (ok) {
    const bool moved = cand.x != t_current.x || cand.y != t_current.y;
    return {cand, false, moved};
  }

  // Fall back to the exact QP with the min-distance constraints linearized
  // at t_current (each is conservative: the linearized halfplane lies inside
  // the true feasible set, and t_current itself satisfies it).
  Qp2dProblem qp;
  qp.curvature = s.delta;
  qp.linear = grad - s.delta * Eigen::Vector2d(t_current.x, t_current.y);
  qp.box = region;
  for (const auto& o : others) {
    const Eigen::Vector2d diff(t_current.x - o.x, t_current.y - o.y);
    const double n = diff.norm();
    if (n <= 0.0)
      throw NumericalFailure("mm_step: coincident antennas in distance constraint");
    const Eigen::Vector2d a = diff / n;
    qp.halfplanes.push_back({a, min_distance + a.dot(Eigen::Vector2d(o.x, o.y))});
  }
  try {
    const Qp2dSolution sol = solve_qp2d(qp);
    const bool moved = sol.point.x != t_current.x || sol.point.y != t_current.y;
    return {sol.point, true, moved};
  } catch (const QpInfeasible&) {
    return {t_current, true, false};  // keep the current (feasible) point
  }
}

PositionOptResult optimize_position(const DecoupledCoefficients& c, Position2D start,
                                    const LinkGeometry& geom_i,
                                    const LinkGeometry& geom_e, double wavelength,
                                    const TransmitRegion& region,
                                    const std::vector<Position2D>& others,
                                    double min_distance, double epsilon1,
                                    int max_iter) {
  if (max_iter < 1) throw std::invalid_argument("max_iter must be >= 1");
  PositionOptResult res;
  res.position = start;
  double f_cur = position_objective(c, start, geom_i, geom_e, wavelength);
  res.objective_trace.push_back(f_cur);
  for (int it = 0; it < max_iter; ++it) {
    const SurrogateState s =
        surrogate_eta(c, res.position, geom_i, geom_e, wavelength);
    const MmStepResult step = mm_step(s, res.position, geom_i, geom_e, wavelength,
                                      region, others, min_distance);
    res.position = step.position;
    const double f_new =
        position_objective(c, res.position, geom_i, geom_e, wavelength);
    res.objective_trace.push_back(f_new);
    ++res.iterations;
    const double scale = std::abs(f_new) < 1e-12 ? 1.0 : std::abs(f_new);
    const bool converged = std::abs(f_new - f_cur) <= epsilon1 * scale;
    f_cur = f_new;
    if (converged) break;
  }
  return res;
}

}  // namespace masrm
