#pragma once

#include <vector>

#include "masrm/channel.hpp"
#include "masrm/qp2d.hpp"
#include "masrm/secrecy.hpp"
#include "masrm/types.hpp"

namespace masrm {

/// xi restricted to the position of one antenna m. With
///   P_k = PRM_k^H F_k (transmit-path side of link k),
///   A_I = P_I U_I W_I V^H,            A_E = P_E U_E W_E V_E^H,
///   C_I = P_I U_I W_I U_I^H P_I^H,
///   C_X = sigma2_e^-1 P_E W_X P_E^H,  C_E = P_E U_E W_E U_E^H P_E^H,
/// and combined precoder Q_X = [V | V_E] (rows q_x_i^H), the movable part is
///   f(t) = g_I(t)^H B_I g_I(t) + g_E(t)^H B_E g_E(t)
///          + 2 Re{g_I(t)^H d_I} + 2 Re{g_E(t)^H d_E} + const,
/// where B and d depend on the other antennas' (fixed) positions.
struct DecoupledCoefficients {
  int antenna{0};
  CMatrix a_i_cols;  // A_I, tx_paths_I x M
  CMatrix a_e_cols;  // A_E, tx_paths_E x M
  CMatrix c_i, c_x, c_e;
  CMatrix q_x_rows;  // [V | V_E]
  CMatrix q_e_rows;  // V_E
  CMatrix b_i, b_e;  // Hermitian PSD quadratic kernels for this antenna
  CVector d_i, d_e;  // linear terms for this antenna
};

DecoupledCoefficients decouple(int m, const std::vector<Position2D>& positions,
                               const PrecoderPair& p, const AuxiliarySet& aux,
                               const LinkGeometry& geom_i,
                               const LinkGeometry& geom_e, double sigma2_e,
                               double wavelength);

/// f(t) above, without the constant.
double position_objective(const DecoupledCoefficients& c, Position2D t,
                          const LinkGeometry& geom_i, const LinkGeometry& geom_e,
                          double wavelength);

/// Linearization point data of the quadratic surrogate. Replacing each
/// B with lambda_max(B) I majorizes f by
///   const + 2 sum_j |eta_I_j| cos(kappa_I_j(t)) + 2 sum_j |eta_E_j| cos(kappa_E_j(t)),
/// kappa_k_j(t) = (2 pi / wavelength) rho_k_j(t) - arg(eta_k_j), with
///   eta_k = d_k - (lambda_max(B_k) I - B_k) g_k(t_current).
/// delta bounds the largest Hessian eigenvalue of that trigonometric bound:
///   delta = (16 pi^2 / wavelength^2) (sum_j |eta_I_j| + sum_j |eta_E_j|).
struct SurrogateState {
  CVector eta_i, eta_e;
  double lambda_max_i{0.0}, lambda_max_e{0.0};
  double delta{0.0};
};

SurrogateState surrogate_eta(const DecoupledCoefficients& c, Position2D t_current,
                             const LinkGeometry& geom_i, const LinkGeometry& geom_e,
                             double wavelength);

/// The trigonometric part gamma(t) (without additive constants) and its
/// derivatives.
double gamma_value(const SurrogateState& s, Position2D t, const LinkGeometry& geom_i,
                   const LinkGeometry& geom_e, double wavelength);
Eigen::Vector2d gamma_gradient(const SurrogateState& s, Position2D t,
                               const LinkGeometry& geom_i,
                               const LinkGeometry& geom_e, double wavelength);
Eigen::Matrix2d gamma_hessian(const SurrogateState& s, Position2D t,
                              const LinkGeometry& geom_i, const LinkGeometry& geom_e,
                              double wavelength);

struct MmStepResult {
  Position2D position;
  bool used_qp{false};
  bool moved{false};
};

/// One majorize-minimize step from t_current: the closed-form minimizer
/// t_current - grad/delta of the quadratic upper bound, or, when that point
/// violates the region/min-distance constraints, the exact solution of the
/// projected QP with the distance constraints linearized at t_current.
MmStepResult mm_step(const SurrogateState& s, Position2D t_current,
                     const LinkGeometry& geom_i, const LinkGeometry& geom_e,
                     double wavelength, const TransmitRegion& region,
                     const std::vector<Position2D>& others, double min_distance);

struct PositionOptResult {
  Position2D position;
  std::vector<double> objective_trace;  // f(t^1), f(t^2), ... (non-increasing)
  int iterations{0};
};

/// Iterates mm_step until |f(t^{i+1}) - f(t^i)| <= epsilon1 * |f(t^{i+1})|
/// (absolute test when |f| < 1e-12) or max_iter steps.
PositionOptResult optimize_position(const DecoupledCoefficients& c,
                                    Position2D start, const LinkGeometry& geom_i,
                                    const LinkGeometry& geom_e, double wavelength,
                                    const TransmitRegion& region,
                                    const std::vector<Position2D>& others,
                                    double min_distance, double epsilon1,
                                    int max_iter);

}  // namespace masrm
