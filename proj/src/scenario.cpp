#include "seg/scenario.hpp"

#include <algorithm>
#include <fstream>
#include <initializer_list>
#include <sstream>

namespace seg {
namespace {

using nlohmann::json;

[[noreturn]] void parse_fail(const std::string& what) { throw ScenarioError("scenario parse error: " + what); }
[[noreturn]] void invalid(const std::string& what) { throw ScenarioError("scenario validation error: " + what); }

void check_keys(const json& obj, std::initializer_list<const char*> allowed, const std::string& where) {
  if (!obj.is_object()) parse_fail(where + " must be an object");
  for (const auto& [key, _] : obj.items()) {
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; })) {
      parse_fail("unknown key '" + key + "' in " + where);
    }
  }
}

const json& require(const json& obj, const char* key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) parse_fail("missing '" + std::string(key) + "' in " + where);
  return *it;
}

double number(const json& v, const std::string& where) {
  if (!v.is_number()) parse_fail(where + " must be a number");
  return v.get<double>();
}

double number_or(const json& obj, const char* key, double fallback, const std::string& where) {
  auto it = obj.find(key);
  return it == obj.end() ? fallback : number(*it, where + "." + key);
}

std::optional<double> optional_number(const json& obj, const char* key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return std::nullopt;
  return number(*it, where + "." + key);
}

int integer(const json& v, const std::string& where) {
  if (!v.is_number_integer()) parse_fail(where + " must be an integer");
  return v.get<int>();
}

Vec2 point(const json& v, const std::string& where) {
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
    parse_fail(where + " must be a pair [x, y]");
  }
  return {v[0].get<double>(), v[1].get<double>()};
}

std::vector<Vec2> point_list(const json& v, const std::string& where) {
  if (!v.is_array()) parse_fail(where + " must be a list of points");
  std::vector<Vec2> out;
  for (std::size_t k = 0; k < v.size(); ++k) out.push_back(point(v[k], where + "[" + std::to_string(k) + "]"));
  return out;
}

json to_json(Vec2 p) { return json::array({p.x, p.y}); }

json to_json(const std::vector<Vec2>& pts) {
  json out = json::array();
  for (Vec2 p : pts) out.push_back(to_json(p));
  return out;
}

Obstacle parse_obstacle(const json& v, const std::string& where) {
  const std::string type = require(v, "type", where).get<std::string>();
  if (type == "disk") {
    check_keys(v, {"type", "center", "radius"}, where);
    return DiskObstacle{point(require(v, "center", where), where + ".center"),
                        number(require(v, "radius", where), where + ".radius")};
  }
  if (type == "rect") {
    check_keys(v, {"type", "lo", "hi"}, where);
    return RectObstacle{point(require(v, "lo", where), where + ".lo"),
                        point(require(v, "hi", where), where + ".hi")};
  }
  if (type == "polygon") {
    check_keys(v, {"type", "vertices"}, where);
    return PolygonObstacle{point_list(require(v, "vertices", where), where + ".vertices")};
  }
  parse_fail(where + ": unknown obstacle type '" + type + "'");
}

json obstacle_to_json(const Obstacle& o) {
  return std::visit(
      [](const auto& s) -> json {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, DiskObstacle>) {
          return {{"type", "disk"}, {"center", to_json(s.center)}, {"radius", s.radius}};
        } else if constexpr (std::is_same_v<T, RectObstacle>) {
          return {{"type", "rect"}, {"lo", to_json(s.lo)}, {"hi", to_json(s.hi)}};
        } else {
          return {{"type", "polygon"}, {"vertices", to_json(s.vertices)}};
        }
      },
      o);
}

PatrolTrajectory parse_patrol(const json& v, const std::string& where) {
  const std::string type = require(v, "type", where).get<std::string>();
  if (type == "circle") {
    check_keys(v, {"type", "center", "radius", "omega", "phase"}, where);
    return CirclePatrol{point(require(v, "center", where), where + ".center"),
                        number(require(v, "radius", where), where + ".radius"),
                        number_or(v, "omega", 1.0, where), number_or(v, "phase", 0.0, where)};
  }
  if (type == "lemniscate") {
    check_keys(v, {"type", "center", "scale", "omega", "phase"}, where);
    return LemniscatePatrol{point(require(v, "center", where), where + ".center"),
                            point(require(v, "scale", where), where + ".scale"),
                            number_or(v, "omega", 1.0, where), number_or(v, "phase", 0.0, where)};
  }
  if (type == "polyline") {
    check_keys(v, {"type", "waypoints", "speed", "offset"}, where);
    return PolylinePatrol{point_list(require(v, "waypoints", where), where + ".waypoints"),
                          number_or(v, "speed", 1.0, where), number_or(v, "offset", 0.0, where)};
  }
  parse_fail(where + ": unknown patrol type '" + type + "'");
}

json patrol_to_json(const PatrolTrajectory& p) {
  return std::visit(
      [](const auto& s) -> json {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, CirclePatrol>) {
          return {{"type", "circle"}, {"center", to_json(s.center)}, {"radius", s.radius},
                  {"omega", s.omega}, {"phase", s.phase}};
        } else if constexpr (std::is_same_v<T, LemniscatePatrol>) {
          return {{"type", "lemniscate"}, {"center", to_json(s.center)}, {"scale", to_json(s.scale)},
                  {"omega", s.omega}, {"phase", s.phase}};
        } else {
          return {{"type", "polyline"}, {"waypoints", to_json(s.waypoints)}, {"speed", s.speed},
                  {"offset", s.offset}};
        }
      },
      p);
}

json optional_to_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

bool inside_unit_square(Vec2 p) { return p.x >= 0.0 && p.y >= 0.0 && p.x <= 1.0 && p.y <= 1.0; }

}  // namespace

ScenarioConfig parse_scenario(const json& doc) {
  check_keys(doc, {"name", "grid", "time", "evader", "sensor", "obstacles", "patrols", "solver"}, "scenario");
  ScenarioConfig cfg;
  if (auto it = doc.find("name"); it != doc.end()) cfg.name = it->get<std::string>();

  const json& grid = require(doc, "grid", "scenario");
  check_keys(grid, {"n"}, "grid");
  cfg.n = integer(require(grid, "n", "grid"), "grid.n");

  const json& time = require(doc, "time", "scenario");
  check_keys(time, {"dt", "T"}, "time");
  cfg.dt = number(require(time, "dt", "time"), "time.dt");
  cfg.T = number(require(time, "T", "time"), "time.T");

  const json& evader = require(doc, "evader", "scenario");
  check_keys(evader, {"start", "target", "speed"}, "evader");
  cfg.start = point(require(evader, "start", "evader"), "evader.start");
  cfg.target = point(require(evader, "target", "evader"), "evader.target");
  if (auto it = evader.find("speed"); it != evader.end()) {
    if (it->is_number()) {
      cfg.speed.constant = it->get<double>();
    } else if (it->is_object()) {
      check_keys(*it, {"values"}, "evader.speed");
      for (const auto& v : require(*it, "values", "evader.speed")) cfg.speed.per_node.push_back(number(v, "evader.speed.values"));
    } else {
      parse_fail("evader.speed must be a number or {\"values\": [...]}");
    }
  }

  if (auto it = doc.find("sensor"); it != doc.end()) {
    check_keys(*it, {"K0", "sigma", "alpha", "max_range"}, "sensor");
    cfg.sensor.K0 = number_or(*it, "K0", cfg.sensor.K0, "sensor");
    cfg.sensor.sigma = number_or(*it, "sigma", cfg.sensor.sigma, "sensor");
    cfg.sensor.alpha = number_or(*it, "alpha", cfg.sensor.alpha, "sensor");
    cfg.sensor.max_range = optional_number(*it, "max_range", "sensor");
  }

  if (auto it = doc.find("obstacles"); it != doc.end()) {
    if (!it->is_array()) parse_fail("obstacles must be a list");
    for (std::size_t k = 0; k < it->size(); ++k) {
      cfg.obstacles.push_back(parse_obstacle((*it)[k], "obstacles[" + std::to_string(k) + "]"));
    }
  }

  const json& patrols = require(doc, "patrols", "scenario");
  if (!patrols.is_array()) parse_fail("patrols must be a list");
  for (std::size_t k = 0; k < patrols.size(); ++k) {
    cfg.patrols.push_back(parse_patrol(patrols[k], "patrols[" + std::to_string(k) + "]"));
  }

  if (auto it = doc.find("solver"); it != doc.end()) {
    check_keys(*it, {"step_c", "max_iters", "window", "grad_tol", "perturbation", "cluster_dist", "opt_tol",
                     "nash_tol", "supp_tol", "n_dir"},
               "solver");
    SolverParams& s = cfg.solver;
    s.step_c = number_or(*it, "step_c", s.step_c, "solver");
    if (auto m = it->find("max_iters"); m != it->end()) s.max_iters = integer(*m, "solver.max_iters");
    if (auto m = it->find("window"); m != it->end()) s.window = integer(*m, "solver.window");
    s.grad_tol = number_or(*it, "grad_tol", s.grad_tol, "solver");
    s.perturbation = number_or(*it, "perturbation", s.perturbation, "solver");
    s.cluster_dist = optional_number(*it, "cluster_dist", "solver");
    s.opt_tol = number_or(*it, "opt_tol", s.opt_tol, "solver");
    s.nash_tol = number_or(*it, "nash_tol", s.nash_tol, "solver");
    s.supp_tol = number_or(*it, "supp_tol", s.supp_tol, "solver");
    if (auto m = it->find("n_dir"); m != it->end()) s.n_dir = integer(*m, "solver.n_dir");
  }
  return cfg;
}

json scenario_to_json(const ScenarioConfig& cfg) {
  json doc;
  doc["name"] = cfg.name;
  doc["grid"] = {{"n", cfg.n}};
  doc["time"] = {{"dt", cfg.dt}, {"T", cfg.T}};
  json speed = cfg.speed.per_node.empty() ? json(cfg.speed.constant) : json{{"values", cfg.speed.per_node}};
  doc["evader"] = {{"start", to_json(cfg.start)}, {"target", to_json(cfg.target)}, {"speed", speed}};
  doc["sensor"] = {{"K0", cfg.sensor.K0},
                   {"sigma", cfg.sensor.sigma},
                   {"alpha", cfg.sensor.alpha},
                   {"max_range", optional_to_json(cfg.sensor.max_range)}};
  doc["obstacles"] = json::array();
  for (const auto& o : cfg.obstacles) doc["obstacles"].push_back(obstacle_to_json(o));
  doc["patrols"] = json::array();
  for (const auto& p : cfg.patrols) doc["patrols"].push_back(patrol_to_json(p));
  const SolverParams& s = cfg.solver;
  doc["solver"] = {{"step_c", s.step_c},
                   {"max_iters", s.max_iters},
                   {"window", s.window},
                   {"grad_tol", s.grad_tol},
                   {"perturbation", s.perturbation},
                   {"cluster_dist", optional_to_json(s.cluster_dist)},
                   {"opt_tol", s.opt_tol},
                   {"nash_tol", s.nash_tol},
                   {"supp_tol", s.supp_tol},
                   {"n_dir", s.n_dir}};
  return doc;
}

namespace {

Grid2D make_grid(const ScenarioConfig& cfg) {
  if (cfg.n < 2) invalid("grid.n must be at least 2");
  return Grid2D(cfg.n);
}

TimeGrid make_time(const ScenarioConfig& cfg) {
  if (!(cfg.dt > 0.0)) invalid("time.dt must be positive");
  if (!(cfg.T > 0.0)) invalid("time.T must be positive");
  try {
    return TimeGrid(cfg.dt, cfg.T);
  } catch (const std::invalid_argument& e) {
    invalid(e.what());
  }
}

}  // namespace

Scenario::Scenario(ScenarioConfig config)
    : config_(std::move(config)),
      grid_(make_grid(config_)),
      time_(make_time(config_)),
      phi_(build_level_set(config_.obstacles, grid_)) {
  const auto& cfg = config_;

  if (cfg.speed.per_node.empty()) {
    if (!(cfg.speed.constant > 0.0)) invalid("evader speed must be positive");
    speed_.assign(grid_.node_count(), cfg.speed.constant);
  } else {
    if (cfg.speed.per_node.size() != grid_.node_count()) {
      invalid("evader.speed.values must have (n+1)^2 entries");
    }
    speed_ = cfg.speed.per_node;
    if (*std::min_element(speed_.begin(), speed_.end()) <= 0.0) invalid("evader speed must be positive everywhere");
  }
  max_speed_ = *std::max_element(speed_.begin(), speed_.end());

  if (cfg.dt > grid_.h() / max_speed_ * (1.0 + 1e-9)) {
    std::ostringstream msg;
    msg << "CFL condition violated: dt = " << cfg.dt << " > h / max f = " << grid_.h() / max_speed_;
    invalid(msg.str());
  }

  const SensorModel& s = cfg.sensor;
  if (!(s.K0 > 0.0)) invalid("sensor.K0 must be positive");
  if (!(s.sigma > 0.0)) invalid("sensor.sigma must be positive");
  if (!(s.alpha > 0.0) || s.alpha > kTwoPi + 1e-12) invalid("sensor.alpha out of range (0, 2 pi]");
  if (s.max_range && !(*s.max_range > 0.0)) invalid("sensor.max_range must be positive");

  for (const auto& o : cfg.obstacles) {
    if (const auto* d = std::get_if<DiskObstacle>(&o); d && !(d->radius > 0.0)) invalid("disk radius must be positive");
    if (const auto* r = std::get_if<RectObstacle>(&o); r && !(r->hi.x > r->lo.x && r->hi.y > r->lo.y)) {
      invalid("rect must satisfy lo < hi");
    }
    if (const auto* p = std::get_if<PolygonObstacle>(&o); p && p->vertices.size() < 3) {
      invalid("polygon needs at least three vertices");
    }
  }

  auto check_endpoint = [&](Vec2 p, const char* label) -> NodeIndex {
    if (!inside_unit_square(p)) invalid(std::string(label) + " outside the unit square");
    if (free_space_distance(cfg.obstacles, p) < 0.0) invalid(std::string(label) + " inside obstacle");
    const NodeIndex node = grid_.nearest(p);
    if (!(phi_.at(grid_.index(node)) > 0.0)) invalid(std::string(label) + " snaps to a node outside free space");
    return node;
  };
  start_node_ = check_endpoint(cfg.start, "start");
  target_node_ = check_endpoint(cfg.target, "target");

  if (cfg.patrols.empty()) invalid("at least one patrol trajectory is required");
  for (std::size_t i = 0; i < cfg.patrols.size(); ++i) {
    try {
      validate_patrol(cfg.patrols[i]);
    } catch (const std::invalid_argument& e) {
      invalid("patrols[" + std::to_string(i) + "]: " + e.what());
    }
    for (int k = 0; k <= time_.steps(); ++k) {
      const Vec2 z = patrol_state(cfg.patrols[i], time_.time(k)).position;
      if (!inside_unit_square(z) || !(free_space_distance(cfg.obstacles, z) > 0.0)) {
        invalid("patrols[" + std::to_string(i) + "] leaves free space at t = " + std::to_string(time_.time(k)));
      }
    }
  }

  const SolverParams& sp = cfg.solver;
  if (sp.max_iters < 0) invalid("solver.max_iters must be non-negative");
  if (sp.window < 1) invalid("solver.window must be at least 1");
  if (!(sp.step_c > 0.0)) invalid("solver.step_c must be positive");
  if (!(sp.grad_tol >= 0.0)) invalid("solver.grad_tol must be non-negative");
  if (!(sp.perturbation > 0.0 && sp.perturbation < 1.0)) invalid("solver.perturbation must be in (0, 1)");
  if (sp.cluster_dist && !(*sp.cluster_dist > 0.0)) invalid("solver.cluster_dist must be positive");
  if (!(sp.opt_tol > 0.0) || !(sp.nash_tol > 0.0) || !(sp.supp_tol > 0.0)) invalid("solver tolerances must be positive");
  if (sp.n_dir < 4) invalid("solver.n_dir must be at least 4");
}

double Scenario::speed_at(Vec2 p) const {
  if (config_.speed.per_node.empty()) return config_.speed.constant;
  return grid_.bilinear(p, [this](std::size_t idx) { return speed_[idx]; });
}

double Scenario::cluster_dist() const { return config_.solver.cluster_dist.value_or(4.0 * grid_.h()); }

ScenarioConfig read_scenario_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ScenarioError("cannot open scenario file: " + path.string());
  json doc;
  try {
    doc = json::parse(in, nullptr, true, /*ignore_comments=*/true);
  } catch (const json::parse_error& e) {
    parse_fail(path.string() + ": " + e.what());
  }
  try {
    return parse_scenario(doc);
  } catch (const json::exception& e) {
    parse_fail(path.string() + ": " + e.what());
  }
}

Scenario load_scenario(const std::filesystem::path& path) { return Scenario(read_scenario_config(path)); }

void save_scenario(const std::filesystem::path& path, const ScenarioConfig& config) {
  std::ofstream out(path);
  if (!out) throw ScenarioError("cannot write scenario file: " + path.string());
  out << scenario_to_json(config).dump(2) << '\n';
}

void apply_grid_override(ScenarioConfig& config, int n) {
  if (n < 2) throw ScenarioError("grid override must be at least 2");
  if (!config.speed.per_node.empty() && n != config.n) {
    throw ScenarioError("grid override is not supported with a per-node speed field");
  }
  config.dt *= static_cast<double>(config.n) / n;
  config.n = n;
}

}  // namespace seg
