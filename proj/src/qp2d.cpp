#include "masrm/qp2d.hpp"

#include <limits>
#include <string>

namespace masrm {

namespace {

struct Constraint {
  Eigen::Vector2d a;  // a . t >= b
  double b;
  std::string label;
};

std::vector<Constraint> gather(const Qp2dProblem& prob) {
  const double hw = prob.box.half_width;
  std::vector<Constraint> cs;
  cs.push_back({{1.0, 0.0}, -hw, "box x >= -hw"});
  cs.push_back({{-1.0, 0.0}, -hw, "box x <= hw"});
  cs.push_back({{0.0, 1.0}, -hw, "box y >= -hw"});
  cs.push_back({{0.0, -1.0}, -hw, "box y <= hw"});
  for (size_t i = 0; i < prob.halfplanes.size(); ++i)
    cs.push_back({prob.halfplanes[i].normal, prob.halfplanes[i].offset,
                  "halfplane " + std::to_string(i)});
  return cs;
}

double violation(const Constraint& c, const Eigen::Vector2d& t) {
  return c.b - c.a.dot(t);  // > 0 when violated
}

bool feasible(const std::vector<Constraint>& cs, const Eigen::Vector2d& t,
              double tol) {
  for (const auto& c : cs)
    if (violation(c, t) > tol * (1.0 + std::abs(c.b))) return false;
  return true;
}

}  // namespace

double qp_objective(const Qp2dProblem& prob, Position2D t) {
  const Eigen::Vector2d v(t.x, t.y);
  return 0.5 * prob.curvature * v.squaredNorm() + prob.linear.dot(v);
}

Qp2dSolution solve_qp2d(const Qp2dProblem& prob) {
  if (!(prob.curvature > 0.0))
    throw std::invalid_argument("QP curvature must be > 0");
  if (!(prob.box.half_width > 0.0))
    throw std::invalid_argument("QP box must have positive half-width");
  for (const auto& h : prob.halfplanes)
    if (h.normal.norm() <= 0.0)
      throw std::invalid_argument("QP halfplane has a zero normal");

  const std::vector<Constraint> cs = gather(prob);
  const double tol = 1e-9;

  // A strictly convex QP attains its minimum at the equality-constrained
  // minimizer of some active set; enumerate all of size <= 2 and keep the
  // best feasible candidate.
  std::vector<Eigen::Vector2d> candidates;
  candidates.emplace_back(-prob.linear / prob.curvature);  // unconstrained

  for (const auto& c : cs) {
    // Minimize on the line a . t = b: t = t_unc + nu * a.
    const Eigen::Vector2d t_unc = -prob.linear / prob.curvature;
    const double nu = (c.b - c.a.dot(t_unc)) / c.a.squaredNorm();
    candidates.emplace_back(t_unc + nu * c.a);
  }

  for (size_t i = 0; i < cs.size(); ++i) {
    for (size_t j = i + 1; j < cs.size(); ++j) {
      Eigen::Matrix2d a;
      a.row(0) = cs[i].a.transpose();
      a.row(1) = cs[j].a.transpose();
      const double det = a.determinant();
      if (std::abs(det) <= 1e-14 * cs[i].a.norm() * cs[j].a.norm()) continue;
      candidates.emplace_back(a.inverse() * Eigen::Vector2d(cs[i].b, cs[j].b));
    }
  }

  bool found = false;
  Eigen::Vector2d best = Eigen::Vector2d::Zero();
  double best_obj = std::numeric_limits<double>::infinity();
  for (const auto& t : candidates) {
    if (!t.allFinite() || !feasible(cs, t, tol)) continue;
    const double obj = qp_objective(prob, {t.x(), t.y()});
    const bool tie = found && std::abs(obj - best_obj) <= 1e-12 * (1.0 + std::abs(best_obj));
    const bool better =
        !found || (tie ? (t.x() < best.x() || (t.x() == best.x() && t.y() < best.y()))
                       : obj < best_obj);
    if (better) {
      found = true;
      best = t;
      best_obj = std::min(obj, best_obj);
    }
  }

  if (!found) {
    // Report which constraints exclude the least-violating candidate.
    double least = std::numeric_limits<double>::infinity();
    Eigen::Vector2d least_t = Eigen::Vector2d::Zero();
    for (const auto& t : candidates) {
      if (!t.allFinite()) continue;
      double worst = 0.0;
      for (const auto& c : cs) worst = std::max(worst, violation(c, t));
      if (worst < least) {
        least = worst;
        least_t = t;
      }
    }
    std::string msg = "QP is infeasible; unsatisfiable constraints:";
    for (const auto& c : cs)
      if (violation(c, least_t) > tol * (1.0 + std::abs(c.b))) msg += " [" + c.label + "]";
    throw QpInfeasible(msg);
  }
  return {{best.x(), best.y()}, best_obj};
}

}  // namespace masrm
