#include "masrm/precoder.hpp"

namespace masrm {

namespace {

// Eigen-factored kernel so that the bisection can evaluate V(lambda) and its
// power from cached projections instead of refactorizing per step.
struct ShiftedSolver {
  Eigen::ArrayXd eigs;   // kernel eigenvalues, clamped at 0 (kernel is PSD)
  CMatrix vecs;
  CMatrix rhs_rot;       // vecs^H * rhs
  Eigen::ArrayXd row_sq; // squared row norms of rhs_rot

  ShiftedSolver(const CMatrix& kernel, const CMatrix& rhs) {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(kernel);
    if (es.info() != Eigen::Success)
      throw NumericalFailure("kernel eigendecomposition failed in precoder solve");
    eigs = es.eigenvalues().array().max(0.0);
    vecs = es.eigenvectors();
    rhs_rot = vecs.adjoint() * rhs;
    row_sq = rhs_rot.rowwise().squaredNorm().array();
  }

  Eigen::ArrayXd inverse_shifted(double lambda) const {
    Eigen::ArrayXd shifted = eigs + lambda;
    const double thresh = 1e-12 * shifted.maxCoeff();
    return (shifted > thresh).select(shifted.inverse(), 0.0);
  }

  double power(double lambda) const {
    return (inverse_shifted(lambda).square() * row_sq).sum();
  }

  CMatrix solve(double lambda) const {
    return vecs * (inverse_shifted(lambda).matrix().asDiagonal() * rhs_rot);
  }
};

struct PrecoderProblem {
  ShiftedSolver info;
  ShiftedSolver noise;

  PrecoderProblem(const AuxiliarySet& aux, const CMatrix& h_i, const CMatrix& h_e,
                  double sigma2_e)
      : info(make(aux, h_i, h_e, sigma2_e, true)),
        noise(make(aux, h_i, h_e, sigma2_e, false)) {}

  static ShiftedSolver make(const AuxiliarySet& aux, const CMatrix& h_i,
                            const CMatrix& h_e, double sigma2_e, bool info_side) {
    const auto [k_v, k_ve] = xi_kernels(aux, h_i, h_e, sigma2_e);
    if (info_side) return {k_v, h_i.adjoint() * aux.u_i * aux.w_i};
    return {k_ve, h_e.adjoint() * aux.u_e * aux.w_e};
  }

  double power(double lambda) const { return info.power(lambda) + noise.power(lambda); }

  PrecoderPair pair(double lambda) const {
    return {info.solve(lambda), noise.solve(lambda)};
  }
};

}  // namespace

PrecoderPair precoders_for_lambda(double lambda, const AuxiliarySet& aux,
                                  const CMatrix& h_i, const CMatrix& h_e,
                                  double sigma2_e) {
  if (lambda < 0.0) throw std::invalid_argument("dual variable must be >= 0");
  return PrecoderProblem(aux, h_i, h_e, sigma2_e).pair(lambda);
}

double power_usage(double lambda, const AuxiliarySet& aux, const CMatrix& h_i,
                   const CMatrix& h_e, double sigma2_e) {
  if (lambda < 0.0) throw std::invalid_argument("dual variable must be >= 0");
  return PrecoderProblem(aux, h_i, h_e, sigma2_e).power(lambda);
}

PrecoderSolution solve_precoders(const AuxiliarySet& aux, const CMatrix& h_i,
                                 const CMatrix& h_e, double sigma2_e, double p_max,
                                 const BisectionConfig& cfg) {
  if (!(p_max > 0.0)) throw std::invalid_argument("power budget must be > 0");
  const PrecoderProblem prob(aux, h_i, h_e, sigma2_e);

  const double p0 = prob.power(0.0);
  if (p0 <= p_max * (1.0 + 1e-12) || !(p0 > 0.0))
    return {prob.pair(0.0), 0.0, p0, 0};

  // Bracket: power is non-increasing in lambda, so double until feasible.
  double hi = 1.0;
  int doublings = 0;
  while (prob.power(hi) > p_max) {
    hi *= 2.0;
    if (++doublings > cfg.max_doublings)
      throw NumericalFailure("power bisection failed to bracket the dual variable");
  }

  double lo = 0.0;  // power(lo) > p_max >= power(hi)
  double best = hi;
  int it = 0;
  for (; it < cfg.max_iterations; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;  // bracket exhausted at machine precision
    const double pm = prob.power(mid);
    if (pm > p_max) {
      lo = mid;  // infeasible side: never returned
    } else {
      hi = mid;
      best = mid;
      if (p_max - pm <= cfg.tolerance_power * p_max) break;
    }
    // Relative-width fallback; in practice the power test above fires first.
    if (hi - lo <= cfg.tolerance_lambda * hi) break;
  }
  PrecoderSolution sol{prob.pair(best), best, prob.power(best), it + 1};
  return sol;
}

}  // namespace masrm
