#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "masrm/precoder.hpp"
#include "test_support.hpp"

using namespace masrm;
using namespace masrm::testing;

namespace {

struct Fixture {
  CMatrix h_i, h_e;
  AuxiliarySet aux;
  double sigma2_e{0.9};
};

Fixture make_fixture(Rng& rng, int m = 4, int d = 3, int n_i = 4, int n_e = 4) {
  Fixture f;
  f.h_i = random_complex(n_i, m, rng);
  f.h_e = random_complex(n_e, m, rng);
  f.aux = random_auxiliaries(n_i, n_e, m, d, rng);
  return f;
}

}  // namespace

TEST_CASE("zero auxiliaries give zero precoders at zero dual") {
  Fixture f;
  f.h_i = CMatrix::Identity(3, 3);
  f.h_e = CMatrix::Identity(3, 3);
  f.aux.u_i = CMatrix::Zero(3, 2);
  f.aux.w_i = CMatrix::Identity(2, 2);
  f.aux.u_e = CMatrix::Zero(3, 3);
  f.aux.w_e = CMatrix::Identity(3, 3);
  f.aux.w_x = CMatrix::Zero(3, 3);
  const PrecoderSolution sol = solve_precoders(f.aux, f.h_i, f.h_e, 1.0, 5.0);
  CHECK(sol.lambda == 0.0);
  CHECK(sol.power == 0.0);
  CHECK(sol.pair.v.norm() == 0.0);
  CHECK(sol.pair.v_e.norm() == 0.0);
}

TEST_CASE("regularized precoders solve their linear systems") {
  Rng rng(51);
  for (int k = 0; k < 20; ++k) {
    const Fixture f = make_fixture(rng);
    const auto [k_v, k_ve] = xi_kernels(f.aux, f.h_i, f.h_e, f.sigma2_e);
    const CMatrix rhs_v = f.h_i.adjoint() * f.aux.u_i * f.aux.w_i;
    const CMatrix rhs_ve = f.h_e.adjoint() * f.aux.u_e * f.aux.w_e;
    for (const double lambda : {1e-3, 0.3, 2.0, 50.0}) {
      const PrecoderPair p =
          precoders_for_lambda(lambda, f.aux, f.h_i, f.h_e, f.sigma2_e);
      const Eigen::Index m = k_v.rows();
      const double res_v =
          ((k_v + lambda * CMatrix::Identity(m, m)) * p.v - rhs_v).norm();
      const double res_ve =
          ((k_ve + lambda * CMatrix::Identity(m, m)) * p.v_e - rhs_ve).norm();
      CHECK(res_v <= 1e-9 * (1.0 + p.v.norm()) * (1.0 + k_v.norm() + lambda));
      CHECK(res_ve <= 1e-9 * (1.0 + p.v_e.norm()) * (1.0 + k_ve.norm() + lambda));
    }
  }
}

TEST_CASE("power usage is monotone non-increasing and continuous in the dual") {
  Rng rng(52);
  for (int k = 0; k < 10; ++k) {
    const Fixture f = make_fixture(rng);
    double prev = power_usage(1e-6, f.aux, f.h_i, f.h_e, f.sigma2_e);
    for (int i = 1; i < 20; ++i) {
      const double lambda = 1e-6 * std::pow(10.0, 12.0 * i / 19.0);
      const double cur = power_usage(lambda, f.aux, f.h_i, f.h_e, f.sigma2_e);
      CHECK(cur <= prev * (1.0 + 1e-12));
      prev = cur;
    }
    // continuity probe
    const double a = power_usage(1.0, f.aux, f.h_i, f.h_e, f.sigma2_e);
    const double b = power_usage(1.0 + 1e-9, f.aux, f.h_i, f.h_e, f.sigma2_e);
    CHECK(std::abs(a - b) <= 1e-6 * std::max(1.0, a));
  }
}

TEST_CASE("large dual damps the precoders as rhs / lambda") {
  Rng rng(53);
  const Fixture f = make_fixture(rng);
  const CMatrix rhs_v = f.h_i.adjoint() * f.aux.u_i * f.aux.w_i;
  const CMatrix rhs_ve = f.h_e.adjoint() * f.aux.u_e * f.aux.w_e;
  const double lambda = 1e9;
  const double p = power_usage(lambda, f.aux, f.h_i, f.h_e, f.sigma2_e);
  const double expected = (rhs_v.squaredNorm() + rhs_ve.squaredNorm()) / (lambda * lambda);
  CHECK(p == doctest::Approx(expected).epsilon(1e-4));
}

TEST_CASE("slack power constraint returns the unregularized minimizer") {
  Rng rng(54);
  const Fixture f = make_fixture(rng);
  const double p0 = power_usage(0.0, f.aux, f.h_i, f.h_e, f.sigma2_e);
  REQUIRE(p0 > 0.0);
  const PrecoderSolution sol =
      solve_precoders(f.aux, f.h_i, f.h_e, f.sigma2_e, 2.0 * p0);
  CHECK(sol.lambda == 0.0);
  CHECK(sol.power == doctest::Approx(p0).epsilon(1e-12));
}

TEST_CASE("active power constraint is met to relative tolerance with KKT residuals") {
  Rng rng(55);
  for (int k = 0; k < 25; ++k) {
    const Fixture f = make_fixture(rng);
    const double p0 = power_usage(0.0, f.aux, f.h_i, f.h_e, f.sigma2_e);
    const double p_max = 0.25 * p0;
    const PrecoderSolution sol =
        solve_precoders(f.aux, f.h_i, f.h_e, f.sigma2_e, p_max);
    CHECK(sol.lambda > 0.0);
    CHECK(std::abs(sol.power - p_max) <= 1e-8 * p_max);
    CHECK(sol.pair.power() <= p_max * (1.0 + 1e-9));
    // stationarity of both blocks at the returned dual
    const auto [k_v, k_ve] = xi_kernels(f.aux, f.h_i, f.h_e, f.sigma2_e);
    const Eigen::Index m = k_v.rows();
    const CMatrix rhs_v = f.h_i.adjoint() * f.aux.u_i * f.aux.w_i;
    const CMatrix rhs_ve = f.h_e.adjoint() * f.aux.u_e * f.aux.w_e;
    const double res_v =
        ((k_v + sol.lambda * CMatrix::Identity(m, m)) * sol.pair.v - rhs_v).norm();
    const double res_ve =
        ((k_ve + sol.lambda * CMatrix::Identity(m, m)) * sol.pair.v_e - rhs_ve)
            .norm();
    const double scale = (1.0 + k_v.norm() + sol.lambda);
    CHECK(res_v <= 1e-8 * (1.0 + sol.pair.v.norm()) * scale);
    CHECK(res_ve <= 1e-8 * (1.0 + sol.pair.v_e.norm()) * scale);
  }
}

TEST_CASE("solution minimizes xi among random feasible precoders") {
  Rng rng(56);
  for (int k = 0; k < 5; ++k) {
    const Fixture f = make_fixture(rng);
    const double p0 = power_usage(0.0, f.aux, f.h_i, f.h_e, f.sigma2_e);
    const double p_max = 0.3 * p0;
    const PrecoderSolution sol =
        solve_precoders(f.aux, f.h_i, f.h_e, f.sigma2_e, p_max);
    const double xi_opt = xi_value(sol.pair, f.aux, f.h_i, f.h_e, f.sigma2_e);
    for (int probe = 0; probe < 200; ++probe) {
      PrecoderPair cand = random_precoders(4, 3, p_max, rng);
      if (probe % 2 == 0) {  // also try strictly interior candidates
        const double frac = rng.uniform(0.1, 1.0);
        cand.v *= std::sqrt(frac);
        cand.v_e *= std::sqrt(frac);
      }
      const double xi_cand = xi_value(cand, f.aux, f.h_i, f.h_e, f.sigma2_e);
      CHECK(xi_opt <= xi_cand + 1e-9 * std::max(1.0, std::abs(xi_cand)));
    }
  }
}

TEST_CASE("invalid inputs are rejected") {
  Rng rng(57);
  const Fixture f = make_fixture(rng);
  CHECK_THROWS_AS(precoders_for_lambda(-1.0, f.aux, f.h_i, f.h_e, f.sigma2_e),
                  std::invalid_argument);
  CHECK_THROWS_AS(solve_precoders(f.aux, f.h_i, f.h_e, f.sigma2_e, 0.0),
                  std::invalid_argument);
}
