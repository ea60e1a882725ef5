#include "seg/trajectory.hpp"

#include <algorithm>
#include <limits>

namespace seg {

double CostVector::weighted(const std::vector<double>& lambda) const {
  if (!reached) return std::numeric_limits<double>::infinity();
  double total = 0.0;
  for (std::size_t i = 0; i < J.size() && i < lambda.size(); ++i) total += lambda[i] * J[i];
  return total;
}

double trajectory_distance(const Trajectory& a, const Trajectory& b) {
  if (a.points.empty() || b.points.empty()) return std::numeric_limits<double>::infinity();
  const std::size_t len = std::max(a.points.size(), b.points.size());
  double worst = 0.0;
  for (std::size_t m = 0; m < len; ++m) {
    const Vec2 pa = a.points[std::min(m, a.points.size() - 1)];
    const Vec2 pb = b.points[std::min(m, b.points.size() - 1)];
    worst = std::max(worst, distance(pa, pb));
  }
  return worst;
}

}  // namespace seg
