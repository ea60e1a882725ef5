#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "fixtures.hpp"
#include "oracles.hpp"
#include "seg/scenario.hpp"
#include "seg/visibility.hpp"

using namespace seg;

namespace {

// Unit square with one disk obstacle; the patrol sits left of it.
ScenarioConfig disk_config(int n, double alpha) {
  ScenarioConfig cfg = test::open_config(n);
  cfg.obstacles.push_back(DiskObstacle{{0.5, 0.5}, 0.1});
  cfg.patrols = {CirclePatrol{{0.5, 0.5}, 0.3, 0.2, std::numbers::pi}};
  cfg.start = {0.1, 0.1};
  cfg.target = {0.9, 0.9};
  cfg.sensor.alpha = alpha;
  return cfg;
}

// Segment [z, x] misses the disk by `clearance` (negative: passes inside).
double segment_clearance(Vec2 z, Vec2 x, Vec2 c, double r) {
  const Vec2 d = x - z;
  const double len2 = dot(d, d);
  const double t = len2 > 0.0 ? std::clamp(dot(c - z, d) / len2, 0.0, 1.0) : 0.0;
  return distance(z + t * d, c) - r;
}

}  // namespace

TEST_CASE("QVI without obstacles keeps every free node unoccluded") {
  const Grid2D g(30);
  const LevelSetField phi = build_level_set({}, g);
  for (Vec2 z : {Vec2{0.5, 0.5}, Vec2{0.13, 0.71}, Vec2{0.9, 0.2}}) {
    const std::vector<double> psi = solve_visibility_qvi(phi, z);
    for (std::size_t idx = 0; idx < g.node_count(); ++idx) {
      CHECK(psi[idx] <= phi.at(idx));
      if (!(phi.at(idx) > 0.0)) continue;
      CHECK(psi[idx] > 0.0);
      // psi tracks the smallest phi seen along the ray from the observer.
      const Vec2 x = g.point(g.node(idx));
      double ray_min = phi.at(idx);
      for (int s = 0; s <= 200; ++s) ray_min = std::min(ray_min, phi.interpolate(z + (s / 200.0) * (x - z)));
      CHECK(std::abs(psi[idx] - ray_min) <= g.h());
    }
  }
}

TEST_CASE("QVI shadow behind a disk matches the geometric shadow") {
  const Grid2D g(80);
  const std::vector<Obstacle> obs{DiskObstacle{{0.5, 0.5}, 0.1}};
  const LevelSetField phi = build_level_set(obs, g);
  const Vec2 z{0.2, 0.5};
  const std::vector<double> psi = solve_visibility_qvi(phi, z);
  const NodeIndex at = g.nearest(z);
  CHECK(psi[g.index(at)] == phi.at(at.i, at.j));
  int shadow = 0;
  int lit = 0;
  for (std::size_t idx = 0; idx < g.node_count(); ++idx) {
    const Vec2 x = g.point(g.node(idx));
    if (!(phi.at(idx) > 0.0)) continue;
    CHECK(psi[idx] <= phi.at(idx));
    const double clearance = segment_clearance(z, x, {0.5, 0.5}, 0.1);
    if (clearance < -2.0 * g.h()) {
      CHECK(psi[idx] < 0.0);
      ++shadow;
    } else if (clearance > 2.0 * g.h()) {
      CHECK(psi[idx] >= 0.0);
      ++lit;
    }
  }
  CHECK(shadow > 100);
  CHECK(lit > 1000);
}

TEST_CASE("nodes next to the observer are unoccluded") {
  const Grid2D g(50);
  const std::vector<Obstacle> obs{DiskObstacle{{0.5, 0.5}, 0.1}};
  const LevelSetField phi = build_level_set(obs, g);
  const Vec2 z{0.3, 0.3};
  const std::vector<double> psi = solve_visibility_qvi(phi, z);
  const NodeIndex a = g.nearest(z);
  for (int dj = -1; dj <= 1; ++dj) {
    for (int di = -1; di <= 1; ++di) CHECK(psi[g.index(a.i + di, a.j + dj)] >= 0.0);
  }
}

TEST_CASE("segment sampling oracle") {
  const Grid2D g(40);
  const std::vector<Obstacle> obs{DiskObstacle{{0.5, 0.5}, 0.1}};
  const LevelSetField phi = build_level_set(obs, g);
  CHECK(visible_oracle(phi, {0.2, 0.3}, {0.2, 0.3}, 2));
  CHECK_FALSE(visible_oracle(phi, {0.2, 0.5}, {0.8, 0.5}, 101));
  CHECK(visible_oracle(phi, {0.2, 0.2}, {0.8, 0.2}, 101));
  const LevelSetField open = build_level_set({}, g);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.01, 0.99);
  for (int k = 0; k < 200; ++k) CHECK(visible_oracle(open, {u(rng), u(rng)}, {u(rng), u(rng)}, 50));
}

TEST_CASE("sector mask") {
  const Vec2 z{0.5, 0.5};
  const Vec2 heading{1.0, 0.0};
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 100; ++k) CHECK(sector_mask(z, heading, kTwoPi, {u(rng), u(rng)}));
  CHECK(sector_mask(z, heading, std::numbers::pi / 2, z + heading));
  CHECK_FALSE(sector_mask(z, heading, 2 * std::numbers::pi / 3, z - heading));
  CHECK(sector_mask(z, heading, 1.0, z));
  // Edge of the closed sector.
  const double half = std::numbers::pi / 4;
  CHECK(sector_mask(z, heading, std::numbers::pi / 2, z + Vec2{std::cos(half), std::sin(half)}));
  CHECK_FALSE(sector_mask(z, heading, std::numbers::pi / 2, z + Vec2{std::cos(half + 1e-6), std::sin(half + 1e-6)}));
}

TEST_CASE("line of sight to off-node points") {
  const Grid2D g(40);
  const std::vector<Obstacle> obs{DiskObstacle{{0.5, 0.5}, 0.1}};
  const LevelSetField phi = build_level_set(obs, g);
  CHECK(line_of_sight(phi, {0.2, 0.5}, {0.35, 0.52}));
  CHECK_FALSE(line_of_sight(phi, {0.2, 0.5}, {0.701, 0.503}));
  CHECK_FALSE(line_of_sight(phi, {0.2, 0.5}, {0.5, 0.5}));
  // A rim point facing the observer is seen, the far rim is not.
  CHECK(line_of_sight(phi, {0.2, 0.5}, {0.4, 0.5}));
  CHECK_FALSE(line_of_sight(phi, {0.2, 0.5}, {0.6, 0.5}));
}

TEST_CASE("open scenario with full aperture sees every free node") {
  ScenarioConfig cfg = test::open_config(30, 1.0);
  const Scenario s(cfg);
  const VisibilityVolume vol = build_visibility_volume(s, 0);
  for (int k = 0; k < vol.slice_count(); ++k) {
    for (std::size_t idx = 0; idx < s.grid().node_count(); ++idx) {
      if (s.phi().at(idx) > 0.0) CHECK(vol.visible(k, idx));
    }
  }
}

TEST_CASE("visibility slice invariants") {
  const Scenario s(disk_config(60, 2.0));
  VisibilitySweep sweep(s.grid());
  const double band = 0.5 * s.grid().h();
  for (double t : {0.0, 0.7, 1.9}) {
    const PatrolState obs = patrol_state(s.patrols()[0], t);
    const VisibilitySlice slice = compute_visibility_slice(s, obs, sweep);
    for (std::size_t idx = 0; idx < s.grid().node_count(); ++idx) {
      CHECK(slice.psi[idx] <= s.phi().at(idx));
      if (slice.mask[idx]) CHECK(s.phi().at(idx) >= -band);
    }
    const NodeIndex a = s.grid().nearest(obs.position);
    CHECK(slice.psi[s.grid().index(a)] > 0.0);
  }
}

TEST_CASE("wider aperture never hides a node") {
  const Scenario narrow(disk_config(50, 1.0));
  const Scenario wide(disk_config(50, 2.5));
  VisibilitySweep sweep(narrow.grid());
  for (double t : {0.0, 1.0, 2.0}) {
    const PatrolState obs = patrol_state(narrow.patrols()[0], t);
    const auto a = compute_visibility_slice(narrow, obs, sweep).mask;
    const auto b = compute_visibility_slice(wide, obs, sweep).mask;
    for (std::size_t idx = 0; idx < a.size(); ++idx) {
      if (a[idx]) CHECK(b[idx]);
    }
  }
}

TEST_CASE("removing an obstacle never hides a node") {
  ScenarioConfig with = disk_config(50, kTwoPi);
  with.obstacles.push_back(RectObstacle{{0.15, 0.7}, {0.3, 0.8}});
  ScenarioConfig without = with;
  without.obstacles.pop_back();
  const Scenario a(with);
  const Scenario b(without);
  VisibilitySweep sweep(a.grid());
  for (double t : {0.0, 0.8, 1.6}) {
    const PatrolState obs = patrol_state(a.patrols()[0], t);
    const auto ma = compute_visibility_slice(a, obs, sweep).mask;
    const auto mb = compute_visibility_slice(b, obs, sweep).mask;
    for (std::size_t idx = 0; idx < ma.size(); ++idx) {
      if (ma[idx]) CHECK(mb[idx]);
    }
  }
}

TEST_CASE("max range cuts the mask") {
  ScenarioConfig cfg = disk_config(40, kTwoPi);
  cfg.sensor.max_range = 0.2;
  const Scenario s(cfg);
  const PatrolState obs = patrol_state(s.patrols()[0], 0.0);
  VisibilitySweep sweep(s.grid());
  const auto mask = compute_visibility_slice(s, obs, sweep).mask;
  for (std::size_t idx = 0; idx < mask.size(); ++idx) {
    if (mask[idx]) CHECK(distance(s.grid().point(s.grid().node(idx)), obs.position) <= 0.2 + 1e-12);
  }
}

TEST_CASE("QVI mask agrees with the sampling oracle on a disk scene") {
  const Scenario s(disk_config(80, 2.0));
  VisibilitySweep sweep(s.grid());
  for (double t : {0.0, 0.5, 1.0, 1.5, 2.0}) {
    const PatrolState obs = patrol_state(s.patrols()[0], t);
    const auto slice = compute_visibility_slice(s, obs, sweep);
    const auto cmp = test::compare_with_oracle(s, obs, [&](std::size_t idx) { return slice.mask[idx] != 0; });
    CHECK(cmp.fraction() <= 0.01);
    CHECK(cmp.far_disagreements == 0);
  }
}

TEST_CASE("packed volume stores every bit") {
  const Grid2D g(9);
  VisibilityVolume vol(g, 3);
  std::mt19937_64 rng(11);
  std::vector<std::vector<std::uint8_t>> masks(3, std::vector<std::uint8_t>(g.node_count()));
  for (auto& m : masks) {
    for (auto& b : m) b = static_cast<std::uint8_t>(rng() & 1u);
  }
  for (int k = 0; k < 3; ++k) vol.assign_slice(k, masks[static_cast<std::size_t>(k)]);
  for (int k = 0; k < 3; ++k) {
    std::size_t count = 0;
    for (std::size_t idx = 0; idx < g.node_count(); ++idx) {
      CHECK(vol.visible(k, idx) == static_cast<bool>(masks[static_cast<std::size_t>(k)][idx]));
      count += masks[static_cast<std::size_t>(k)][idx];
    }
    CHECK(vol.visible_count(k) == count);
  }
  vol.set(1, 5, true);
  CHECK(vol.visible(1, 5));
  vol.set(1, 5, false);
  CHECK_FALSE(vol.visible(1, 5));
}
