#include "seg/geometry.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace seg {

Grid2D::Grid2D(int n) : n_(n), h_(1.0 / n) {
  if (n < 2) {
    throw std::invalid_argument("grid: n must be at least 2 (got " + std::to_string(n) + ")");
  }
}

NodeIndex Grid2D::nearest(Vec2 p) const {
  const int i = static_cast<int>(std::lround(p.x * n_));
  const int j = static_cast<int>(std::lround(p.y * n_));
  return {std::clamp(i, 0, n_), std::clamp(j, 0, n_)};
}

Grid2D::Cell Grid2D::locate(Vec2 p) const {
  const double gx = std::clamp(p.x, 0.0, 1.0) * n_;
  const double gy = std::clamp(p.y, 0.0, 1.0) * n_;
  Cell c;
  c.i0 = std::min(static_cast<int>(gx), n_ - 1);
  c.j0 = std::min(static_cast<int>(gy), n_ - 1);
  c.fx = gx - c.i0;
  c.fy = gy - c.j0;
  return c;
}

TimeGrid::TimeGrid(double dt, double deadline) : dt_(dt), steps_(0) {
  if (!(dt > 0.0)) {
    throw std::invalid_argument("time: dt must be positive");
  }
  if (!(deadline > 0.0)) {
    throw std::invalid_argument("time: deadline T must be positive");
  }
  const double ratio = deadline / dt;
  steps_ = static_cast<int>(std::lround(ratio));
  if (steps_ < 1 || std::abs(ratio - steps_) > 1e-6) {
    throw std::invalid_argument("time: deadline T must be an integer multiple of dt");
  }
}

}  // namespace seg
