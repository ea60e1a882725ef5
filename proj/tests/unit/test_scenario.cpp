#include <cmath>
#include <fstream>
#include <numbers>
#include <random>

#include "doctest.h"
#include "fixtures.hpp"
#include "seg/level_set.hpp"
#include "seg/patrol.hpp"
#include "seg/scenario.hpp"

using namespace seg;

namespace {

// Independent signed distance of the open unit square minus one disk.
double square_disk_distance(Vec2 p, Vec2 c, double r) {
  const double wall = std::min({p.x, p.y, 1.0 - p.x, 1.0 - p.y});
  const double disk = std::hypot(p.x - c.x, p.y - c.y) - r;
  return std::min(wall, disk);
}

std::filesystem::path temp_file(const std::string& name, const std::string& contents) {
  const auto path = std::filesystem::temp_directory_path() / ("seg_unit_" + name);
  std::ofstream(path) << contents;
  return path;
}

}  // namespace

TEST_CASE("grid maps indices to points bijectively") {
  const Grid2D g(8);
  CHECK(g.h() * g.n() == 1.0);
  for (std::size_t idx = 0; idx < g.node_count(); ++idx) {
    const NodeIndex node = g.node(idx);
    CHECK(g.index(node) == idx);
    CHECK(g.nearest(g.point(node)) == node);
  }
  CHECK_THROWS(Grid2D(1));
}

TEST_CASE("example 1 loads with the published grid and deadline") {
  const Scenario s = load_scenario(test::shipped_scenario("example1"));
  CHECK(s.patrol_count() == 2);
  CHECK(s.grid().n() == 200);
  CHECK(s.grid().h() == doctest::Approx(0.005));
  CHECK(s.time().dt() == doctest::Approx(0.005));
  CHECK(s.time().deadline() == doctest::Approx(4.0));
  CHECK(s.time().steps() == 800);
}

TEST_CASE("CFL violation is rejected") {
  ScenarioConfig cfg = test::open_config(40);
  cfg.dt = 2.0 / cfg.n;
  try {
    Scenario s(cfg);
    FAIL("expected a validation error");
  } catch (const ScenarioError& e) {
    CHECK(std::string(e.what()).find("CFL") != std::string::npos);
  }
}

TEST_CASE("start inside an obstacle is rejected") {
  ScenarioConfig cfg = test::open_config(40);
  cfg.obstacles.push_back(DiskObstacle{{0.2, 0.5}, 0.05});
  try {
    Scenario s(cfg);
    FAIL("expected a validation error");
  } catch (const ScenarioError& e) {
    CHECK(std::string(e.what()).find("start inside obstacle") != std::string::npos);
  }
}

TEST_CASE("other validation errors") {
  ScenarioConfig cfg = test::open_config(40);
  SUBCASE("aperture") {
    cfg.sensor.alpha = 7.0;
    CHECK_THROWS_AS(Scenario{cfg}, ScenarioError);
  }
  SUBCASE("no patrols") {
    cfg.patrols.clear();
    CHECK_THROWS_AS(Scenario{cfg}, ScenarioError);
  }
  SUBCASE("patrol through obstacle") {
    cfg.obstacles.push_back(DiskObstacle{{0.75, 0.5}, 0.03});
    CHECK_THROWS_AS(Scenario{cfg}, ScenarioError);
  }
  SUBCASE("non-positive sigma") {
    cfg.sensor.sigma = 0.0;
    CHECK_THROWS_AS(Scenario{cfg}, ScenarioError);
  }
}

TEST_CASE("endpoints snap to the nearest node") {
  ScenarioConfig cfg = test::open_config(40);
  cfg.start = {0.2012, 0.4991};
  const Scenario s(cfg);
  CHECK(s.start_node() == NodeIndex{8, 20});
  CHECK(s.start().x == doctest::Approx(0.2));
}

TEST_CASE("level set without obstacles is the distance to the square") {
  const Grid2D g(20);
  const LevelSetField phi = build_level_set({}, g);
  for (int j = 1; j < g.n(); ++j) {
    for (int i = 1; i < g.n(); ++i) {
      const Vec2 p = g.point(i, j);
      CHECK(phi.at(i, j) == doctest::Approx(std::min({p.x, p.y, 1 - p.x, 1 - p.y})));
      CHECK(phi.at(i, j) > 0.0);
    }
  }
}

TEST_CASE("disk level set values") {
  const Grid2D g(20);
  const std::vector<Obstacle> obs{DiskObstacle{{0.5, 0.5}, 0.1}};
  const LevelSetField phi = build_level_set(obs, g);
  CHECK(phi.at(10, 10) == doctest::Approx(-0.1));
  CHECK(phi.at(12, 10) == doctest::Approx(0.0).epsilon(1e-12));
  for (std::size_t idx = 0; idx < g.node_count(); ++idx) {
    CHECK(phi.at(idx) == doctest::Approx(square_disk_distance(g.point(g.node(idx)), {0.5, 0.5}, 0.1)));
  }
}

TEST_CASE("rectangle and polygon signed distance") {
  const Obstacle rect = RectObstacle{{0.4, 0.4}, {0.6, 0.5}};
  CHECK(signed_distance(rect, {0.5, 0.45}) == doctest::Approx(-0.05));
  CHECK(signed_distance(rect, {0.7, 0.45}) == doctest::Approx(0.1));
  CHECK(signed_distance(rect, {0.7, 0.6}) == doctest::Approx(std::hypot(0.1, 0.1)));
  // Same square as a polygon, both orientations.
  const Obstacle ccw = PolygonObstacle{{{0.4, 0.4}, {0.6, 0.4}, {0.6, 0.5}, {0.4, 0.5}}};
  const Obstacle cw = PolygonObstacle{{{0.4, 0.4}, {0.4, 0.5}, {0.6, 0.5}, {0.6, 0.4}}};
  for (Vec2 p : {Vec2{0.5, 0.45}, Vec2{0.7, 0.45}, Vec2{0.7, 0.6}, Vec2{0.41, 0.49}}) {
    CHECK(signed_distance(ccw, p) == doctest::Approx(signed_distance(rect, p)));
    CHECK(signed_distance(cw, p) == doctest::Approx(signed_distance(rect, p)));
  }
}

TEST_CASE("level sets of the shipped scenarios are 1-Lipschitz on neighbour pairs") {
  std::mt19937_64 rng(7);
  for (const auto& name : test::shipped_names()) {
    const Scenario s = test::shipped_at(name, 100);
    const Grid2D& g = s.grid();
    std::uniform_int_distribution<int> pick(0, g.n() - 1);
    std::uniform_int_distribution<int> step(-1, 1);
    for (int trial = 0; trial < 1000; ++trial) {
      const int i = pick(rng) + 0;
      const int j = pick(rng) + 0;
      int ni = std::clamp(i + step(rng), 0, g.n());
      int nj = std::clamp(j + step(rng), 0, g.n());
      const double gap = std::abs(s.phi().at(i, j) - s.phi().at(ni, nj));
      CHECK(gap <= distance(g.point(i, j), g.point(ni, nj)) + 1e-9);
    }
  }
}

TEST_CASE("circle patrol states") {
  const PatrolTrajectory c = CirclePatrol{{0.5, 0.5}, 0.25, 1.0, 0.0};
  const PatrolState s0 = patrol_state(c, 0.0);
  CHECK(s0.position.x == doctest::Approx(0.75));
  CHECK(s0.position.y == doctest::Approx(0.5));
  CHECK(s0.heading.x == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(s0.heading.y == doctest::Approx(1.0));
  const PatrolState s1 = patrol_state(c, std::numbers::pi);
  CHECK(s1.position.x == doctest::Approx(0.25));
  CHECK(s1.position.y == doctest::Approx(0.5));
  CHECK(s1.heading.y == doctest::Approx(-1.0));
}

TEST_CASE("four phase-shifted circles start equally spaced") {
  const Scenario s = load_scenario(test::shipped_scenario("example4"));
  REQUIRE(s.patrol_count() == 4);
  std::vector<Vec2> z;
  for (const auto& p : s.patrols()) z.push_back(patrol_state(p, 0.0).position);
  const double side = distance(z[0], z[1]);
  for (int k = 0; k < 4; ++k) CHECK(distance(z[k], z[(k + 1) % 4]) == doctest::Approx(side));
  CHECK(distance(z[0], z[2]) == doctest::Approx(side * std::numbers::sqrt2));
}

TEST_CASE("lemniscate heading is the normalized derivative") {
  const LemniscatePatrol lem{{0.5, 0.5}, {0.2, 0.1}, 1.3, 0.4};
  const double t = 0.7;
  const double eps = 1e-6;
  const Vec2 a = patrol_state(lem, t - eps).position;
  const Vec2 b = patrol_state(lem, t + eps).position;
  const Vec2 v = b - a;
  const PatrolState st = patrol_state(lem, t);
  CHECK(st.heading.x == doctest::Approx(v.x / norm(v)).epsilon(1e-6));
  CHECK(st.heading.y == doctest::Approx(v.y / norm(v)).epsilon(1e-6));
}

TEST_CASE("polyline corner keeps the incoming heading") {
  const PolylinePatrol poly{{{0.2, 0.2}, {0.8, 0.2}, {0.8, 0.8}}, 1.0, 0.0};
  const PatrolState corner = patrol_state(poly, 0.6);
  CHECK(corner.position.x == doctest::Approx(0.8));
  CHECK(corner.heading.x == doctest::Approx(1.0));
  CHECK(corner.heading.y == doctest::Approx(0.0));
  const PatrolState after = patrol_state(poly, 0.7);
  CHECK(after.heading.y == doctest::Approx(1.0));
  CHECK_THROWS(validate_patrol(PolylinePatrol{{{0.2, 0.2}}, 1.0, 0.0}));
}

TEST_CASE("shipped patrols have unit headings and stay in free space") {
  for (const auto& name : test::shipped_names()) {
    const Scenario s = test::shipped_at(name, 100);
    for (const auto& p : s.patrols()) {
      for (int k = 0; k <= s.time().steps(); ++k) {
        const PatrolState st = patrol_state(p, s.time().time(k));
        CHECK(std::abs(norm(st.heading) - 1.0) <= 1e-12);
        CHECK(s.phi().interpolate(st.position) > 0.0);
      }
    }
  }
}

TEST_CASE("scenario round trip through the file format") {
  for (const auto& name : test::shipped_names()) {
    const ScenarioConfig cfg = read_scenario_config(test::shipped_scenario(name));
    CHECK(parse_scenario(scenario_to_json(cfg)) == cfg);
  }
  ScenarioConfig cfg = test::open_config(30);
  cfg.obstacles.push_back(PolygonObstacle{{{0.4, 0.7}, {0.6, 0.7}, {0.5, 0.9}}});
  cfg.patrols.push_back(PolylinePatrol{{{0.1, 0.1}, {0.9, 0.1}, {0.9, 0.3}}, 0.5, 0.1});
  cfg.sensor.max_range = 0.4;
  cfg.solver.cluster_dist = 0.03;
  const auto path = std::filesystem::temp_directory_path() / "seg_unit_roundtrip.json";
  save_scenario(path, cfg);
  CHECK(read_scenario_config(path) == cfg);
}

TEST_CASE("malformed scenario files are parse errors") {
  CHECK_THROWS_AS(read_scenario_config(temp_file("bad.json", "{ not json")), ScenarioError);
  CHECK_THROWS_AS(read_scenario_config(temp_file("unknown.json", R"({"grid": {"n": 10}, "bogus": 1})")),
                  ScenarioError);
  CHECK_THROWS_AS(read_scenario_config("/nonexistent/scenario.json"), ScenarioError);
}

TEST_CASE("grid override keeps dt / h") {
  ScenarioConfig cfg = read_scenario_config(test::shipped_scenario("example1"));
  apply_grid_override(cfg, 100);
  CHECK(cfg.n == 100);
  CHECK(cfg.dt == doctest::Approx(0.01));
  CHECK_THROWS_AS(apply_grid_override(cfg, 1), ScenarioError);
}
