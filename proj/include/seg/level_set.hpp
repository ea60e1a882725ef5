#pragma once

#include <span>
#include <variant>
#include <vector>

#include "seg/geometry.hpp"

namespace seg {

struct DiskObstacle {
  Vec2 center;
  double radius = 0.0;
  friend bool operator==(const DiskObstacle&, const DiskObstacle&) = default;
};

// Axis-aligned rectangle [lo.x, hi.x] x [lo.y, hi.y].
struct RectObstacle {
  Vec2 lo;
  Vec2 hi;
  friend bool operator==(const RectObstacle&, const RectObstacle&) = default;
};

// Simple polygon; vertices in either orientation, closing edge implied.
struct PolygonObstacle {
  std::vector<Vec2> vertices;
  friend bool operator==(const PolygonObstacle&, const PolygonObstacle&) = default;
};

using Obstacle = std::variant<DiskObstacle, RectObstacle, PolygonObstacle>;

// Signed distance to the obstacle boundary, negative inside the obstacle.
double signed_distance(const Obstacle& shape, Vec2 p);

// phi > 0 in free space, 0 on its boundary, < 0 inside obstacles.
class LevelSetField {
 public:
  LevelSetField(Grid2D grid, std::vector<double> values);

  const Grid2D& grid() const { return grid_; }
  std::span<const double> values() const { return values_; }
  double at(std::size_t node) const { return values_[node]; }
  double at(int i, int j) const { return values_[grid_.index(i, j)]; }
  double interpolate(Vec2 p) const;

 private:
  Grid2D grid_;
  std::vector<double> values_;
};

// Signed distance to the boundary of the free space: the unit square minus the
// union of obstacles.
LevelSetField build_level_set(std::span<const Obstacle> obstacles, const Grid2D& grid);

double free_space_distance(std::span<const Obstacle> obstacles, Vec2 p);

}  // namespace seg
