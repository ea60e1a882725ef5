#pragma once

#include <variant>
#include <vector>

#include "seg/geometry.hpp"

namespace seg {

// z(t) = center + radius (cos tau, sin tau), tau = omega t + phase.
// Positive omega runs counterclockwise.
struct CirclePatrol {
  Vec2 center;
  double radius = 0.0;
  double omega = 1.0;
  double phase = 0.0;
  friend bool operator==(const CirclePatrol&, const CirclePatrol&) = default;
};

// Gerono figure-eight: z(t) = center + (sx cos tau, sy sin tau cos tau),
// tau = omega t + phase. A negative sy mirrors the curve about its center line.
struct LemniscatePatrol {
  Vec2 center;
  Vec2 scale;
  double omega = 1.0;
  double phase = 0.0;
  friend bool operator==(const LemniscatePatrol&, const LemniscatePatrol&) = default;
};

// Closed polyline traversed at constant speed, starting `offset` arc length
// past the first waypoint.
struct PolylinePatrol {
  std::vector<Vec2> waypoints;
  double speed = 1.0;
  double offset = 0.0;
  friend bool operator==(const PolylinePatrol&, const PolylinePatrol&) = default;
};

using PatrolTrajectory = std::variant<CirclePatrol, LemniscatePatrol, PolylinePatrol>;

struct PatrolState {
  Vec2 position;
  Vec2 heading;  // unit vector along the velocity
};

PatrolState patrol_state(const PatrolTrajectory& patrol, double t);

// Throws std::invalid_argument when the parametrization is degenerate
// (zero radius or speed, repeated waypoints, ...).
void validate_patrol(const PatrolTrajectory& patrol);

}  // namespace seg
