#pragma once

#include "masrm/secrecy.hpp"
#include "masrm/types.hpp"

namespace masrm {

/// Controls for the power-constraint bisection on the dual variable.
struct BisectionConfig {
  double tolerance_power{1e-8};   // relative: |power - p_max| <= tol * p_max
  double tolerance_lambda{1e-12}; // relative bracket width fallback
  int max_doublings{64};          // upper-bound search for the bracket
  int max_iterations{300};
};

struct PrecoderSolution {
  PrecoderPair pair;
  double lambda{0.0};  // dual variable of the power constraint
  double power{0.0};   // tr(V V^H + V_E V_E^H) at the solution
  int iterations{0};   // bisection steps taken (0 when the constraint is slack)
};

/// Regularized minimizers of xi for a fixed dual variable:
///   V(lambda)   = (K_v  + lambda I)^+ H_I^H U_I W_I
///   V_E(lambda) = (K_ve + lambda I)^+ H_E^H U_E W_E
/// with ^+ the Hermitian pseudo-inverse (eigenvalues below
/// 1e-12 * max shifted eigenvalue are dropped).
PrecoderPair precoders_for_lambda(double lambda, const AuxiliarySet& aux,
                                  const CMatrix& h_i, const CMatrix& h_e,
                                  double sigma2_e);

/// Transmit power of precoders_for_lambda(lambda, ...); continuous and
/// non-increasing in lambda.
double power_usage(double lambda, const AuxiliarySet& aux, const CMatrix& h_i,
                   const CMatrix& h_e, double sigma2_e);

/// Global minimizer of xi subject to tr(V V^H + V_E V_E^H) <= p_max.
/// If the unconstrained minimizer is feasible it is returned with lambda = 0;
/// otherwise the dual variable is bisected until the power constraint is met
/// to tolerance (complementary slackness). The returned point is always on
/// the feasible side: power <= p_max.
PrecoderSolution solve_precoders(const AuxiliarySet& aux, const CMatrix& h_i,
                                 const CMatrix& h_e, double sigma2_e,
                                 double p_max, const BisectionConfig& cfg = {});

}  // namespace masrm
