#pragma once

#include <vector>

#include "masrm/types.hpp"

namespace masrm {

/// Linear inequality normal . t >= offset.
struct Halfplane {
  Eigen::Vector2d normal;
  double offset{0.0};
};

/// Strictly convex 2-D QP:
///   minimize (curvature / 2) ||t||^2 + linear . t
///   subject to |t_x| <= box.half_width, |t_y| <= box.half_width,
///              and every halfplane constraint.
struct Qp2dProblem {
  double curvature{1.0};  // > 0
  Eigen::Vector2d linear{0.0, 0.0};
  TransmitRegion box;
  std::vector<Halfplane> halfplanes;
};

struct Qp2dSolution {
  Position2D point;
  double objective{0.0};
};

class QpInfeasible : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

double qp_objective(const Qp2dProblem& prob, Position2D t);

/// Exact global minimizer by enumerating active sets of size 0, 1, 2 over
/// the four box edges plus the halfplanes. Throws QpInfeasible (with the
/// violated constraints named) when the feasible set is empty. Ties between
/// equal-objective candidates break toward the lexicographically smaller
/// (x, y).
Qp2dSolution solve_qp2d(const Qp2dProblem& prob);

}  // namespace masrm
