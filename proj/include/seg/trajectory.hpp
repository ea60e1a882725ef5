#pragma once

#include <vector>

#include "seg/geometry.hpp"

namespace seg {

// Evader path sampled once per timestep: points[m] ~ y(t_m), t_m = m dt.
struct Trajectory {
  std::vector<Vec2> points;
  double dt = 0.0;
  bool reached = false;

  int steps() const { return points.empty() ? 0 : static_cast<int>(points.size()) - 1; }
  double arrival_time() const { return steps() * dt; }
};

// Per-patrol cumulative observability J_1..J_r of one trajectory.
struct CostVector {
  std::vector<double> J;
  bool reached = false;

  double weighted(const std::vector<double>& lambda) const;
};

// Largest pointwise distance after aligning both paths in time; the shorter
// one is padded with its final point.
double trajectory_distance(const Trajectory& a, const Trajectory& b);

}  // namespace seg
