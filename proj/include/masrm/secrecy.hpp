#pragma once

#include <utility>

#include "masrm/types.hpp"

namespace masrm {

/// Information precoder V (M x d) and artificial-noise precoder V_E (M x M).
struct PrecoderPair {
  CMatrix v;
  CMatrix v_e;

  double power() const {
    return v.squaredNorm() + v_e.squaredNorm();
  }
};

/// Auxiliary variables of the MSE reformulation: linear receive filters
/// u_i (N_I x d), u_e (N_E x M) and positive-definite weights
/// w_i (d x d), w_e (M x M), w_x (N_E x N_E).
struct AuxiliarySet {
  CMatrix u_i;
  CMatrix w_i;
  CMatrix u_e;
  CMatrix w_e;
  CMatrix w_x;
};

/// Mutual information log|I + H V V^H H^H (H V_E V_E^H H^H + sigma2 I)^-1|
/// in nats; V_E may be empty (treated as zero).
double mutual_information_nats(const CMatrix& h, const CMatrix& v,
                               const CMatrix& v_e, double sigma2);

/// Unclamped rate difference between the intended receiver and the
/// eavesdropper, bits/s/Hz.
double secrecy_rate_raw(const CMatrix& h_i, const CMatrix& h_e,
                        const PrecoderPair& p, double sigma2_i, double sigma2_e);

/// Achievable secrecy rate max(0, raw), bits/s/Hz.
double secrecy_rate(const CMatrix& h_i, const CMatrix& h_e,
                    const PrecoderPair& p, double sigma2_i, double sigma2_e);

/// MMSE receive filter at the intended receiver:
/// (H V_E V_E^H H^H + sigma2 I + H V V^H H^H)^-1 H V.
CMatrix update_decoder_ir(const CMatrix& h_i, const PrecoderPair& p,
                          double sigma2_i);

/// MSE matrix at the intended receiver for an arbitrary filter u:
/// (u^H H V - I)(u^H H V - I)^H + u^H (H V_E V_E^H H^H + sigma2 I) u.
CMatrix mse_ir(const CMatrix& h_i, const PrecoderPair& p, const CMatrix& u,
               double sigma2_i);

/// Optimal weight W_I = E_I^-1 with symmetrization and a conditioning guard
/// (eigenvalues floored at 1e-12 * trace when cond(E) would exceed 1e12).
CMatrix update_weight_ir(const CMatrix& h_i, const PrecoderPair& p,
                         const CMatrix& u, double sigma2_i);

/// MMSE filter the eavesdropper would use on the artificial noise:
/// (sigma2 I + H_E V_E V_E^H H_E^H)^-1 H_E V_E.
CMatrix update_decoder_eve(const CMatrix& h_e, const PrecoderPair& p,
                           double sigma2_e);

/// Eavesdropper-side MSE matrix (u^H H V_E - I)(..)^H + sigma2 u^H u.
CMatrix mse_eve(const CMatrix& h_e, const PrecoderPair& p, const CMatrix& u,
                double sigma2_e);

CMatrix update_weight_eve(const CMatrix& h_e, const PrecoderPair& p,
                          const CMatrix& u, double sigma2_e);

/// E_X = I + sigma2^-1 H_E (V V^H + V_E V_E^H) H_E^H; its inverse is the
/// closed-form optimal W_X.
CMatrix e_x(const CMatrix& h_e, const PrecoderPair& p, double sigma2_e);
CMatrix update_weight_x(const CMatrix& h_e, const PrecoderPair& p,
                        double sigma2_e);

/// All five auxiliaries at their closed-form optima for fixed precoders.
AuxiliarySet optimal_auxiliaries(const CMatrix& h_i, const CMatrix& h_e,
                                 const PrecoderPair& p, double sigma2_i,
                                 double sigma2_e);

/// Reformulated objective, nats:
///   h1 = log|W_I| - tr(W_I E_I) + d
///   h2 = log|W_E| - tr(W_E E_E) + M
///   h3 = log|W_X| - tr(W_X E_X) + N_E
/// At the optimal auxiliaries this equals ln(2) * secrecy_rate_raw.
double objective_f(const AuxiliarySet& aux, const PrecoderPair& p,
                   const CMatrix& h_i, const CMatrix& h_e, double sigma2_i,
                   double sigma2_e);

/// Quadratic kernels of the precoder subproblem: the objective terms that
/// depend on (V, V_E) collapse to
///   xi = -2 Re tr(W_I V^H H_I^H U_I) + tr(V^H K_v V)
///        -2 Re tr(W_E V_E^H H_E^H U_E) + tr(V_E^H K_ve V_E)
/// with K_v = H_I^H U_I W_I U_I^H H_I + sigma2_e^-1 H_E^H W_X H_E and
/// K_ve = K_v + H_E^H U_E W_E U_E^H H_E. Returns (K_v, K_ve), symmetrized.
std::pair<CMatrix, CMatrix> xi_kernels(const AuxiliarySet& aux,
                                       const CMatrix& h_i, const CMatrix& h_e,
                                       double sigma2_e);

/// The precoder-dependent part xi itself (see xi_kernels); F + xi is
/// constant in (V, V_E) for fixed auxiliaries and channels.
double xi_value(const PrecoderPair& p, const AuxiliarySet& aux,
                const CMatrix& h_i, const CMatrix& h_e, double sigma2_e);

/// log-determinant of a Hermitian positive-definite matrix.
double log_det_hermitian(const CMatrix& m);

/// Inverse of a Hermitian matrix with symmetrization and the conditioning
/// guard described at update_weight_ir. Throws NumericalFailure when the
/// matrix is not usably positive (non-finite or trace <= 0).
CMatrix invert_hermitian_guarded(const CMatrix& m, const char* what);

}  // namespace masrm
