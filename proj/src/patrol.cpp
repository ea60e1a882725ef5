#include "seg/patrol.hpp"

#include <cmath>
#include <stdexcept>

namespace seg {
namespace {

Vec2 unit(Vec2 v) {
  const double len = norm(v);
  return {v.x / len, v.y / len};
}

PatrolState circle_state(const CirclePatrol& c, double t) {
  const double tau = c.omega * t + c.phase;
  const Vec2 pos = c.center + c.radius * Vec2{std::cos(tau), std::sin(tau)};
  const Vec2 vel = (c.radius * c.omega) * Vec2{-std::sin(tau), std::cos(tau)};
  return {pos, unit(vel)};
}

PatrolState lemniscate_state(const LemniscatePatrol& l, double t) {
  const double tau = l.omega * t + l.phase;
  const Vec2 pos = l.center + Vec2{l.scale.x * std::cos(tau), l.scale.y * std::sin(tau) * std::cos(tau)};
  const Vec2 vel = l.omega * Vec2{-l.scale.x * std::sin(tau), l.scale.y * std::cos(2.0 * tau)};
  return {pos, unit(vel)};
}

PatrolState polyline_state(const PolylinePatrol& p, double t) {
  const auto& w = p.waypoints;
  const std::size_t count = w.size();
  double length = 0.0;
  for (std::size_t k = 0; k < count; ++k) length += distance(w[k], w[(k + 1) % count]);

  double s = std::fmod(p.speed * t + p.offset, length);
  if (s < 0.0) s += length;

  // Segment k runs from w[k] to w[k+1]; s is located in the half-open
  // interval (start, end], so a vertex belongs to its incoming segment.
  std::size_t seg = count - 1;
  double seg_start = length - distance(w[count - 1], w[0]);
  if (s > 0.0) {
    double acc = 0.0;
    for (std::size_t k = 0; k < count; ++k) {
      const double len = distance(w[k], w[(k + 1) % count]);
      if (s <= acc + len || k == count - 1) {
        seg = k;
        seg_start = acc;
        break;
      }
      acc += len;
    }
  }
  const Vec2 a = w[seg];
  const Vec2 b = w[(seg + 1) % count];
  const double len = distance(a, b);
  const double frac = s > 0.0 ? std::clamp((s - seg_start) / len, 0.0, 1.0) : 1.0;
  return {a + frac * (b - a), unit(b - a)};
}

}  // namespace

PatrolState patrol_state(const PatrolTrajectory& patrol, double t) {
  return std::visit(
      [t](const auto& p) -> PatrolState {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, CirclePatrol>) {
          return circle_state(p, t);
        } else if constexpr (std::is_same_v<T, LemniscatePatrol>) {
          return lemniscate_state(p, t);
        } else {
          return polyline_state(p, t);
        }
      },
      patrol);
}

void validate_patrol(const PatrolTrajectory& patrol) {
  std::visit(
      [](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, CirclePatrol>) {
          if (!(p.radius > 0.0)) throw std::invalid_argument("circle patrol: radius must be positive");
          if (p.omega == 0.0) throw std::invalid_argument("circle patrol: omega must be nonzero");
        } else if constexpr (std::is_same_v<T, LemniscatePatrol>) {
          if (p.scale.x == 0.0 || p.scale.y == 0.0) {
            throw std::invalid_argument("lemniscate patrol: scale components must be nonzero");
          }
          if (p.omega == 0.0) throw std::invalid_argument("lemniscate patrol: omega must be nonzero");
        } else {
          if (p.waypoints.size() < 2) {
            throw std::invalid_argument("polyline patrol: needs at least two waypoints");
          }
          if (!(p.speed > 0.0)) throw std::invalid_argument("polyline patrol: speed must be positive");
          for (std::size_t k = 0; k < p.waypoints.size(); ++k) {
            if (distance(p.waypoints[k], p.waypoints[(k + 1) % p.waypoints.size()]) == 0.0) {
              throw std::invalid_argument("polyline patrol: repeated consecutive waypoint");
            }
          }
        }
      },
      patrol);
}

}  // namespace seg
