#include "seg/level_set.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace seg {
namespace {

double segment_distance(Vec2 p, Vec2 a, Vec2 b) {
  const Vec2 ab = b - a;
  const double len2 = dot(ab, ab);
  double t = len2 > 0.0 ? dot(p - a, ab) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return distance(p, a + t * ab);
}

double disk_distance(const DiskObstacle& d, Vec2 p) { return distance(p, d.center) - d.radius; }

double rect_distance(const RectObstacle& r, Vec2 p) {
  const Vec2 c = 0.5 * (r.lo + r.hi);
  const Vec2 half = 0.5 * (r.hi - r.lo);
  const double qx = std::abs(p.x - c.x) - half.x;
  const double qy = std::abs(p.y - c.y) - half.y;
  const double outside = std::hypot(std::max(qx, 0.0), std::max(qy, 0.0));
  const double inside = std::min(std::max(qx, qy), 0.0);
  return outside + inside;
}

double polygon_distance(const PolygonObstacle& poly, Vec2 p) {
  const auto& v = poly.vertices;
  double best = std::numeric_limits<double>::infinity();
  bool inside = false;
  for (std::size_t k = 0, prev = v.size() - 1; k < v.size(); prev = k++) {
    const Vec2 a = v[prev];
    const Vec2 b = v[k];
    best = std::min(best, segment_distance(p, a, b));
    // even-odd crossing test
    if ((a.y > p.y) != (b.y > p.y)) {
      const double x_cross = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
      if (p.x < x_cross) inside = !inside;
    }
  }
  return inside ? -best : best;
}

}  // namespace

double signed_distance(const Obstacle& shape, Vec2 p) {
  return std::visit(
      [&](const auto& s) -> double {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, DiskObstacle>) {
          return disk_distance(s, p);
        } else if constexpr (std::is_same_v<T, RectObstacle>) {
          return rect_distance(s, p);
        } else {
          return polygon_distance(s, p);
        }
      },
      shape);
}

double free_space_distance(std::span<const Obstacle> obstacles, Vec2 p) {
  double phi = std::min({p.x, p.y, 1.0 - p.x, 1.0 - p.y});
  for (const auto& shape : obstacles) {
    phi = std::min(phi, signed_distance(shape, p));
  }
  return phi;
}

LevelSetField::LevelSetField(Grid2D grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.node_count()) {
    throw std::invalid_argument("level set: value count does not match grid");
  }
}

double LevelSetField::interpolate(Vec2 p) const {
  return grid_.bilinear(p, [this](std::size_t idx) { return values_[idx]; });
}

LevelSetField build_level_set(std::span<const Obstacle> obstacles, const Grid2D& grid) {
  std::vector<double> values(grid.node_count());
  for (int j = 0; j <= grid.n(); ++j) {
    for (int i = 0; i <= grid.n(); ++i) {
      values[grid.index(i, j)] = free_space_distance(obstacles, grid.point(i, j));
    }
  }
  return LevelSetField(grid, std::move(values));
}

}  // namespace seg
