#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "seg/geometry.hpp"
#include "seg/level_set.hpp"
#include "seg/patrol.hpp"

namespace seg {

class ScenarioError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SensorModel {
  double K0 = 1.0;
  double sigma = 0.1;
  double alpha = kTwoPi;               // aperture in radians, (0, 2 pi]
  std::optional<double> max_range;     // none: unlimited
  friend bool operator==(const SensorModel&, const SensorModel&) = default;
};

struct SolverParams {
  double step_c = 0.5;                 // ascent step constant (scale-free, see game.hpp)
  int max_iters = 60;
  int window = 20;                     // stopping window for the best-G improvement test
  double grad_tol = 1e-5;              // relative best-G improvement over `window` iterations
  double perturbation = 0.02;          // delta used to split lambda* into optimal trajectories
  std::optional<double> cluster_dist;  // none: 4 h
  double opt_tol = 0.05;
  double nash_tol = 0.05;
  double supp_tol = 1e-3;
  int n_dir = 64;
  friend bool operator==(const SolverParams&, const SolverParams&) = default;
};

// Either a constant speed or one value per grid node (row-major in j).
struct SpeedSpec {
  double constant = 1.0;
  std::vector<double> per_node;
  friend bool operator==(const SpeedSpec&, const SpeedSpec&) = default;
};

// Raw contents of a scenario file; Scenario materializes and validates it.
struct ScenarioConfig {
  std::string name;
  int n = 200;
  double dt = 0.005;
  double T = 4.0;
  Vec2 start;
  Vec2 target;
  SpeedSpec speed;
  SensorModel sensor;
  std::vector<Obstacle> obstacles;
  std::vector<PatrolTrajectory> patrols;
  SolverParams solver;
  friend bool operator==(const ScenarioConfig&, const ScenarioConfig&) = default;
};

class Scenario {
 public:
  // Throws ScenarioError naming the violated constraint.
  explicit Scenario(ScenarioConfig config);

  const ScenarioConfig& config() const { return config_; }
  const Grid2D& grid() const { return grid_; }
  const TimeGrid& time() const { return time_; }
  const LevelSetField& phi() const { return phi_; }

  // Endpoints snapped to grid nodes.
  Vec2 start() const { return grid_.point(start_node_); }
  Vec2 target() const { return grid_.point(target_node_); }
  NodeIndex start_node() const { return start_node_; }
  NodeIndex target_node() const { return target_node_; }

  std::span<const double> speed() const { return speed_; }
  double speed_at(Vec2 p) const;
  double max_speed() const { return max_speed_; }

  const SensorModel& sensor() const { return config_.sensor; }
  std::span<const PatrolTrajectory> patrols() const { return config_.patrols; }
  int patrol_count() const { return static_cast<int>(config_.patrols.size()); }
  const SolverParams& solver() const { return config_.solver; }
  double cluster_dist() const;

 private:
  ScenarioConfig config_;
  Grid2D grid_;
  TimeGrid time_;
  LevelSetField phi_;
  NodeIndex start_node_;
  NodeIndex target_node_;
  std::vector<double> speed_;
  double max_speed_ = 1.0;
};

ScenarioConfig parse_scenario(const nlohmann::json& doc);
nlohmann::json scenario_to_json(const ScenarioConfig& config);

ScenarioConfig read_scenario_config(const std::filesystem::path& path);
Scenario load_scenario(const std::filesystem::path& path);
void save_scenario(const std::filesystem::path& path, const ScenarioConfig& config);

// Changes the grid resolution; dt is rescaled so that dt/h is preserved.
void apply_grid_override(ScenarioConfig& config, int n);

}  // namespace seg
