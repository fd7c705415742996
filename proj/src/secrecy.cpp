#include "masrm/secrecy.hpp"

#include <string>

namespace masrm {

namespace {

constexpr double kCondCap = 1e12;

CMatrix symmetrize(const CMatrix& m) { return 0.5 * (m + m.adjoint()); }

void check_link(const CMatrix& h, const PrecoderPair& p, double sigma2,
                const char* side) {
  if (h.rows() < 1 || h.cols() < 1)
    throw std::invalid_argument(std::string(side) + ": empty channel matrix");
  if (p.v.rows() != h.cols() || (p.v_e.size() && p.v_e.rows() != h.cols()))
    throw std::invalid_argument(std::string(side) +
                                ": precoder row count does not match channel columns");
  if (!(sigma2 > 0.0))
    throw std::invalid_argument(std::string(side) + ": noise power must be > 0");
}

}  // namespace

double log_det_hermitian(const CMatrix& m) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(m, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success)
    throw NumericalFailure("eigendecomposition failed in log_det_hermitian");
  double acc = 0.0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    const double ev = es.eigenvalues()[i];
    acc += std::log(std::max(ev, 1e-300));  // -inf guard; non-PD gives a huge penalty
  }
  return acc;
}

CMatrix invert_hermitian_guarded(const CMatrix& m, const char* what) {
  const CMatrix s = symmetrize(m);
  if (!s.allFinite())
    throw NumericalFailure(std::string(what) + ": matrix has non-finite entries");
  Eigen::SelfAdjointEigenSolver<CMatrix> es(s);
  if (es.info() != Eigen::Success)
    throw NumericalFailure(std::string(what) + ": eigendecomposition failed");
  Eigen::ArrayXd ev = es.eigenvalues().array();
  const double top = ev.maxCoeff();
  if (!(top > 0.0))
    throw NumericalFailure(std::string(what) + ": matrix is not positive definite");
  if (ev.minCoeff() <= 0.0 || top / ev.minCoeff() > kCondCap) {
    // Cap the condition number rather than fail: floor the spectrum.
    const double floor_val = std::max(1e-12 * s.trace().real(), top / kCondCap);
    ev = ev.max(floor_val);
  }
  const CMatrix inv =
      es.eigenvectors() * ev.inverse().matrix().asDiagonal() * es.eigenvectors().adjoint();
  return symmetrize(inv);
}

double mutual_information_nats(const CMatrix& h, const CMatrix& v,
                               const CMatrix& v_e, double sigma2) {
  const Eigen::Index n = h.rows();
  CMatrix j = sigma2 * CMatrix::Identity(n, n);
  if (v_e.size()) {
    const CMatrix hv_e = h * v_e;
    j += hv_e * hv_e.adjoint();
  }
  Eigen::LLT<CMatrix> llt(j);
  if (llt.info() != Eigen::Success)
    throw NumericalFailure("interference covariance is not positive definite");
  // log|I + (HV)^H J^-1 (HV)| via the whitened d x d Gram matrix.
  const CMatrix w = llt.matrixL().solve(h * v);
  const Eigen::Index d = w.cols();
  return log_det_hermitian(CMatrix::Identity(d, d) + w.adjoint() * w);
}

double secrecy_rate_raw(const CMatrix& h_i, const CMatrix& h_e,
                        const PrecoderPair& p, double sigma2_i, double sigma2_e) {
  check_link(h_i, p, sigma2_i, "intended receiver");
  check_link(h_e, p, sigma2_e, "eavesdropper");
  const double r_i = mutual_information_nats(h_i, p.v, p.v_e, sigma2_i);
  const double r_e = mutual_information_nats(h_e, p.v, p.v_e, sigma2_e);
  return (r_i - r_e) / M_LN2;
}

double secrecy_rate(const CMatrix& h_i, const CMatrix& h_e, const PrecoderPair& p,
                    double sigma2_i, double sigma2_e) {
  return std::max(0.0, secrecy_rate_raw(h_i, h_e, p, sigma2_i, sigma2_e));
}

CMatrix update_decoder_ir(const CMatrix& h_i, const PrecoderPair& p,
                          double sigma2_i) {
  check_link(h_i, p, sigma2_i, "intended receiver");
  const Eigen::Index n = h_i.rows();
  const CMatrix hv = h_i * p.v;
  const CMatrix hve = h_i * p.v_e;
  const CMatrix cov = symmetrize(hve * hve.adjoint() + hv * hv.adjoint()) +
                      sigma2_i * CMatrix::Identity(n, n);
  return Eigen::LDLT<CMatrix>(cov).solve(hv);
}

CMatrix mse_ir(const CMatrix& h_i, const PrecoderPair& p, const CMatrix& u,
               double sigma2_i) {
  const Eigen::Index d = p.v.cols();
  const CMatrix a = u.adjoint() * (h_i * p.v) - CMatrix::Identity(d, d);
  const CMatrix uhve = u.adjoint() * (h_i * p.v_e);
  return symmetrize(a * a.adjoint() + uhve * uhve.adjoint() +
                    sigma2_i * (u.adjoint() * u));
}

CMatrix update_weight_ir(const CMatrix& h_i, const PrecoderPair& p,
                         const CMatrix& u, double sigma2_i) {
  return invert_hermitian_guarded(mse_ir(h_i, p, u, sigma2_i), "IR MSE matrix");
}

CMatrix update_decoder_eve(const CMatrix& h_e, const PrecoderPair& p,
                           double sigma2_e) {
  check_link(h_e, p, sigma2_e, "eavesdropper");
  const Eigen::Index n = h_e.rows();
  const CMatrix hve = h_e * p.v_e;
  const CMatrix cov =
      symmetrize(hve * hve.adjoint()) + sigma2_e * CMatrix::Identity(n, n);
  return Eigen::LDLT<CMatrix>(cov).solve(hve);
}

CMatrix mse_eve(const CMatrix& h_e, const PrecoderPair& p, const CMatrix& u,
                double sigma2_e) {
  const Eigen::Index m = p.v_e.cols();
  const CMatrix a = u.adjoint() * (h_e * p.v_e) - CMatrix::Identity(m, m);
  return symmetrize(a * a.adjoint() + sigma2_e * (u.adjoint() * u));
}

CMatrix update_weight_eve(const CMatrix& h_e, const PrecoderPair& p,
                          const CMatrix& u, double sigma2_e) {
  return invert_hermitian_guarded(mse_eve(h_e, p, u, sigma2_e),
                                  "eavesdropper MSE matrix");
}

CMatrix e_x(const CMatrix& h_e, const PrecoderPair& p, double sigma2_e) {
  const Eigen::Index n = h_e.rows();
  const CMatrix hv = h_e * p.v;
  const CMatrix hve = h_e * p.v_e;
  return CMatrix::Identity(n, n) +
         symmetrize(hv * hv.adjoint() + hve * hve.adjoint()) / sigma2_e;
}

CMatrix update_weight_x(const CMatrix& h_e, const PrecoderPair& p,
                        double sigma2_e) {
  return invert_hermitian_guarded(e_x(h_e, p, sigma2_e), "total-signal Gram matrix");
}

AuxiliarySet optimal_auxiliaries(const CMatrix& h_i, const CMatrix& h_e,
                                 const PrecoderPair& p, double sigma2_i,
                                 double sigma2_e) {
  AuxiliarySet aux;
  aux.u_i = update_decoder_ir(h_i, p, sigma2_i);
  aux.u_e = update_decoder_eve(h_e, p, sigma2_e);
  aux.w_i = update_weight_ir(h_i, p, aux.u_i, sigma2_i);
  aux.w_e = update_weight_eve(h_e, p, aux.u_e, sigma2_e);
  aux.w_x = update_weight_x(h_e, p, sigma2_e);
  return aux;
}

double objective_f(const AuxiliarySet& aux, const PrecoderPair& p,
                   const CMatrix& h_i, const CMatrix& h_e, double sigma2_i,
                   double sigma2_e) {
  const double d = static_cast<double>(p.v.cols());
  const double m = static_cast<double>(p.v_e.cols());
  const double n_e = static_cast<double>(h_e.rows());
  const double h1 = log_det_hermitian(aux.w_i) -
                    (aux.w_i * mse_ir(h_i, p, aux.u_i, sigma2_i)).trace().real() + d;
  const double h2 = log_det_hermitian(aux.w_e) -
                    (aux.w_e * mse_eve(h_e, p, aux.u_e, sigma2_e)).trace().real() + m;
  const double h3 = log_det_hermitian(aux.w_x) -
                    (aux.w_x * e_x(h_e, p, sigma2_e)).trace().real() + n_e;
  return h1 + h2 + h3;
}

std::pair<CMatrix, CMatrix> xi_kernels(const AuxiliarySet& aux, const CMatrix& h_i,
                                       const CMatrix& h_e, double sigma2_e) {
  const CMatrix ui_h = aux.u_i.adjoint() * h_i;  // d x M
  const CMatrix ue_h = aux.u_e.adjoint() * h_e;  // M x M
  const CMatrix k_v =
      symmetrize(ui_h.adjoint() * aux.w_i * ui_h + h_e.adjoint() * aux.w_x * h_e / sigma2_e);
  const CMatrix k_ve = symmetrize(k_v + ue_h.adjoint() * aux.w_e * ue_h);
  return {k_v, k_ve};
}

double xi_value(const PrecoderPair& p, const AuxiliarySet& aux, const CMatrix& h_i,
                const CMatrix& h_e, double sigma2_e) {
  const auto [k_v, k_ve] = xi_kernels(aux, h_i, h_e, sigma2_e);
  const double lin_i = (aux.w_i * p.v.adjoint() * h_i.adjoint() * aux.u_i).trace().real();
  const double lin_e =
      (aux.w_e * p.v_e.adjoint() * h_e.adjoint() * aux.u_e).trace().real();
  const double quad_v = (p.v.adjoint() * k_v * p.v).trace().real();
  const double quad_ve = (p.v_e.adjoint() * k_ve * p.v_e).trace().real();
  return -2.0 * lin_i + quad_v - 2.0 * lin_e + quad_ve;
}

}  // namespace masrm
