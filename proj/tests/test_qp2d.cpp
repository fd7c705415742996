#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <string>
#include <vector>

#include "masrm/qp2d.hpp"
#include "masrm/rng.hpp"

using namespace masrm;

namespace {

// All constraints of the problem in a . t >= b form (box edges first),
// rebuilt here independently of the solver's internals.
struct LinearConstraint {
  Eigen::Vector2d a;
  double b;
};

std::vector<LinearConstraint> all_constraints(const Qp2dProblem& prob) {
  const double hw = prob.box.half_width;
  std::vector<LinearConstraint> cs = {{{1.0, 0.0}, -hw},
                                      {{-1.0, 0.0}, -hw},
                                      {{0.0, 1.0}, -hw},
                                      {{0.0, -1.0}, -hw}};
  for (const auto& h : prob.halfplanes) cs.push_back({h.normal, h.offset});
  return cs;
}

bool strictly_feasible(const std::vector<LinearConstraint>& cs,
                       const Eigen::Vector2d& t) {
  return std::all_of(cs.begin(), cs.end(),
                     [&](const LinearConstraint& c) { return c.a.dot(t) >= c.b; });
}

// Best strictly feasible point of an n x n grid over [cx-r, cx+r]^2.
bool grid_best(const Qp2dProblem& prob, const std::vector<LinearConstraint>& cs,
               Eigen::Vector2d center, double radius, int n,
               Eigen::Vector2d* best, double* best_obj) {
  bool found = false;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const Eigen::Vector2d t(center.x() - radius + 2.0 * radius * i / (n - 1),
                              center.y() - radius + 2.0 * radius * j / (n - 1));
      if (std::abs(t.x()) > prob.box.half_width ||
          std::abs(t.y()) > prob.box.half_width)
        continue;
      if (!strictly_feasible(cs, t)) continue;
      const double obj = qp_objective(prob, {t.x(), t.y()});
      if (!found || obj < *best_obj) {
        found = true;
        *best = t;
        *best_obj = obj;
      }
    }
  }
  return found;
}

// Verifies stationarity with nonnegative multipliers on the active set by
// enumerating support subsets of size <= 2.
bool kkt_holds(const Qp2dProblem& prob, const Eigen::Vector2d& t) {
  const std::vector<LinearConstraint> cs = all_constraints(prob);
  const Eigen::Vector2d grad = prob.curvature * t + prob.linear;
  std::vector<Eigen::Vector2d> active;
  for (const auto& c : cs)
    if (std::abs(c.a.dot(t) - c.b) <= 1e-7 * (1.0 + std::abs(c.b)))
      active.push_back(c.a);
  const double tol = 1e-8 * (1.0 + grad.norm());
  if (grad.norm() <= tol) return true;
  for (size_t i = 0; i < active.size(); ++i) {
    const double li = grad.dot(active[i]) / active[i].squaredNorm();
    if (li >= -1e-10 && (grad - li * active[i]).norm() <= tol) return true;
    for (size_t j = i + 1; j < active.size(); ++j) {
      Eigen::Matrix2d a;
      a.col(0) = active[i];
      a.col(1) = active[j];
      if (std::abs(a.determinant()) <= 1e-12) continue;
      const Eigen::Vector2d lambda = a.inverse() * grad;
      if (lambda.minCoeff() >= -1e-10 &&
          (grad - a * lambda).norm() <= tol)
        return true;
    }
  }
  return false;
}

}  // namespace

TEST_CASE("interior minimum is the unconstrained one") {
  Qp2dProblem prob;
  prob.curvature = 2.0;
  prob.linear = {-1.0, 0.5};
  prob.box.half_width = 10.0;
  const Qp2dSolution sol = solve_qp2d(prob);
  CHECK(sol.point.x == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(sol.point.y == doctest::Approx(-0.25).epsilon(1e-14));
  CHECK(sol.objective == doctest::Approx(-0.3125).epsilon(1e-14));
}

TEST_CASE("minimum clamps to a box edge and to a box vertex") {
  Qp2dProblem prob;
  prob.curvature = 1.0;
  prob.box.half_width = 1.0;

  prob.linear = {-5.0, 0.0};
  Qp2dSolution sol = solve_qp2d(prob);
  CHECK(sol.point.x == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(sol.point.y == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(sol.objective == doctest::Approx(-4.5).epsilon(1e-14));

  prob.linear = {-5.0, -7.0};
  sol = solve_qp2d(prob);
  CHECK(sol.point.x == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(sol.point.y == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(sol.objective == doctest::Approx(-11.0).epsilon(1e-14));
}

TEST_CASE("single active halfplane matches the analytic projection") {
  Rng rng(61);
  for (int k = 0; k < 50; ++k) {
    Qp2dProblem prob;
    prob.curvature = rng.uniform(0.5, 3.0);
    prob.linear = {rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
    prob.box.half_width = 50.0;  // large enough that the box stays inactive
    const Eigen::Vector2d u = -prob.linear / prob.curvature;
    Eigen::Vector2d a{rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
    if (a.norm() < 0.1) a = {1.0, 0.3};
    const double b = a.dot(u) + rng.uniform(0.1, 2.0);  // cuts off u
    prob.halfplanes.push_back({a, b});
    const Qp2dSolution sol = solve_qp2d(prob);
    const Eigen::Vector2d expected = u + a * (b - a.dot(u)) / a.squaredNorm();
    CHECK(std::abs(sol.point.x - expected.x()) < 1e-12);
    CHECK(std::abs(sol.point.y - expected.y()) < 1e-12);
  }
}

TEST_CASE("random QPs beat every strictly feasible grid point and satisfy KKT") {
  Rng rng(62);
  int tested = 0;
  for (int k = 0; k < 100; ++k) {
    Qp2dProblem prob;
    prob.curvature = rng.uniform(0.2, 5.0);
    prob.linear = {rng.uniform(-3.0, 3.0), rng.uniform(-3.0, 3.0)};
    prob.box.half_width = rng.uniform(0.5, 2.0);
    // Anchor point inside the box keeps the random halfplanes satisfiable.
    const Eigen::Vector2d anchor{
        rng.uniform(-0.8, 0.8) * prob.box.half_width,
        rng.uniform(-0.8, 0.8) * prob.box.half_width};
    const int n_hp = static_cast<int>(rng.uniform(0.0, 4.0));
    for (int h = 0; h < n_hp; ++h) {
      Eigen::Vector2d a{rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
      if (a.norm() < 0.05) a = {0.6, -0.8};
      prob.halfplanes.push_back({a, a.dot(anchor) - rng.uniform(0.0, 0.5)});
    }

    const Qp2dSolution sol = solve_qp2d(prob);
    const std::vector<LinearConstraint> cs = all_constraints(prob);
    const Eigen::Vector2d t(sol.point.x, sol.point.y);
    for (const auto& c : cs)
      CHECK(c.a.dot(t) >= c.b - 1e-9 * (1.0 + std::abs(c.b)));
    CHECK(sol.objective ==
          doctest::Approx(qp_objective(prob, sol.point)).epsilon(1e-12));
    CHECK(kkt_holds(prob, t));

    Eigen::Vector2d coarse;
    double coarse_obj = 0.0;
    if (!grid_best(prob, cs, {0.0, 0.0}, prob.box.half_width, 201, &coarse,
                   &coarse_obj))
      continue;  // feasible set too thin for the coarse grid; KKT still checked
    ++tested;
    Eigen::Vector2d fine;
    double fine_obj = 0.0;
    const double radius = 2.0 * prob.box.half_width / 200.0;
    if (!grid_best(prob, cs, coarse, radius, 201, &fine, &fine_obj)) {
      fine_obj = coarse_obj;
    }
    const double scale = 1.0 + std::abs(fine_obj);
    CHECK(sol.objective <= std::min(coarse_obj, fine_obj) + 1e-12 * scale);
  }
  CHECK(tested >= 80);  // the grid oracle actually exercised most instances
}

TEST_CASE("halfplane order does not change the solution") {
  Rng rng(63);
  for (int k = 0; k < 30; ++k) {
    Qp2dProblem prob;
    prob.curvature = rng.uniform(0.2, 5.0);
    prob.linear = {rng.uniform(-3.0, 3.0), rng.uniform(-3.0, 3.0)};
    prob.box.half_width = 1.0;
    for (int h = 0; h < 4; ++h) {
      Eigen::Vector2d a{rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
      if (a.norm() < 0.05) a = {0.6, -0.8};
      prob.halfplanes.push_back({a, a.dot(Eigen::Vector2d::Zero()) - rng.uniform(0.1, 0.5)});
    }
    const Qp2dSolution fwd = solve_qp2d(prob);
    std::reverse(prob.halfplanes.begin(), prob.halfplanes.end());
    const Qp2dSolution rev = solve_qp2d(prob);
    CHECK(std::abs(fwd.point.x - rev.point.x) <= 1e-12);
    CHECK(std::abs(fwd.point.y - rev.point.y) <= 1e-12);
  }
}

TEST_CASE("infeasible problems raise a certificate naming constraints") {
  Qp2dProblem prob;
  prob.box.half_width = 1.0;
  prob.halfplanes.push_back({{1.0, 0.0}, 2.0});  // x >= 2 outside the box
  CHECK_THROWS_WITH_AS(solve_qp2d(prob),
                       doctest::Contains("halfplane 0"), QpInfeasible);

  prob.halfplanes = {{{1.0, 0.0}, 0.5}, {{-1.0, 0.0}, 0.5}};  // x >= 0.5, x <= -0.5
  CHECK_THROWS_AS(solve_qp2d(prob), QpInfeasible);
}

TEST_CASE("degenerate problem parameters are rejected") {
  Qp2dProblem prob;
  prob.box.half_width = 1.0;
  prob.curvature = 0.0;
  CHECK_THROWS_AS(solve_qp2d(prob), std::invalid_argument);
  prob.curvature = 1.0;
  prob.box.half_width = 0.0;
  CHECK_THROWS_AS(solve_qp2d(prob), std::invalid_argument);
  prob.box.half_width = 1.0;
  prob.halfplanes.push_back({{0.0, 0.0}, -1.0});
  CHECK_THROWS_AS(solve_qp2d(prob), std::invalid_argument);
}
