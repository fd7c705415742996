#include "masrm/types.hpp"

#include <limits>
#include <string>

namespace masrm {

double min_pairwise_distance(const std::vector<Position2D>& pts) {
  double best = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < pts.size(); ++i)
    for (size_t j = i + 1; j < pts.size(); ++j)
      best = std::min(best, distance(pts[i], pts[j]));
  return best;
}

void validate_positions(const std::vector<Position2D>& pts,
                        const TransmitRegion& region, double min_dist) {
  for (size_t i = 0; i < pts.size(); ++i) {
    if (!pts[i].is_finite())
      throw std::invalid_argument("position " + std::to_string(i) + " is not finite");
    if (!region.contains(pts[i], 1e-12))
      throw std::invalid_argument("position " + std::to_string(i) +
                                  " lies outside the transmit region");
  }
  const double d = min_pairwise_distance(pts);
  if (d < min_dist - 1e-12)
    throw std::invalid_argument("positions violate the minimum antenna spacing: " +
                                std::to_string(d) + " < " + std::to_string(min_dist));
}

std::vector<Position2D> planar_grid(int count, double spacing) {
  if (count < 1) throw std::invalid_argument("planar_grid: count must be >= 1");
  if (!(spacing > 0.0)) throw std::invalid_argument("planar_grid: spacing must be > 0");
  int rows = 1;
  for (int r = 1; r * r <= count; ++r)
    if (count % r == 0) rows = r;
  const int cols = count / rows;
  std::vector<Position2D> pts;
  pts.reserve(count);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c)
      pts.push_back({(c - 0.5 * (cols - 1)) * spacing, (r - 0.5 * (rows - 1)) * spacing});
  return pts;
}

}  // namespace masrm
