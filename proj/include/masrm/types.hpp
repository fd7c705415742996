#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

namespace masrm {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

/// Antenna coordinate in the 2-D transmit plane, meters.
struct Position2D {
  double x{0.0};
  double y{0.0};

  bool is_finite() const { return std::isfinite(x) && std::isfinite(y); }
};

inline double distance(Position2D a, Position2D b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

/// Square movement region [-half_width, half_width]^2 centered at the
/// array reference point.
struct TransmitRegion {
  double half_width{0.0};

  bool contains(Position2D p, double tol = 0.0) const {
    return std::abs(p.x) <= half_width + tol && std::abs(p.y) <= half_width + tol;
  }
};

/// Smallest pairwise distance; +inf for fewer than two points.
double min_pairwise_distance(const std::vector<Position2D>& pts);

/// Throws std::invalid_argument unless every point lies in the region and
/// all pairwise distances are >= min_dist - 1e-12.
void validate_positions(const std::vector<Position2D>& pts,
                        const TransmitRegion& region, double min_dist);

/// Centered rectangular grid of `count` points with the given spacing.
/// Rows r x cols c with r the largest divisor of count <= sqrt(count);
/// points emitted row-major.
std::vector<Position2D> planar_grid(int count, double spacing);

/// Numerical breakdown (non-finite values, failed factorization, exhausted
/// iteration budget) as opposed to invalid input.
class NumericalFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace masrm
