#include "seg/observability.hpp"

#include <limits>
#include <stdexcept>

#include "seg/scenario.hpp"

namespace seg {

namespace {
constexpr double kRegularizer = 0.1;
}

ObservabilityField::ObservabilityField(const Scenario& scenario, int patrol_index, VisibilityVolume visibility)
    : scenario_(&scenario), patrol_index_(patrol_index), visibility_(std::move(visibility)) {
  if (patrol_index < 0 || patrol_index >= scenario.patrol_count()) {
    throw std::out_of_range("observability: patrol index out of range");
  }
  if (visibility_.slice_count() != scenario.time().slice_count() || !(visibility_.grid() == scenario.grid())) {
    throw std::invalid_argument("observability: visibility volume does not match the scenario grids");
  }
  const auto& patrol = scenario.patrols()[static_cast<std::size_t>(patrol_index)];
  observer_.reserve(static_cast<std::size_t>(scenario.time().slice_count()));
  for (int k = 0; k < scenario.time().slice_count(); ++k) {
    observer_.push_back(patrol_state(patrol, scenario.time().time(k)));
  }
}

double ObservabilityField::eval(std::size_t node, int k) const {
  const SensorModel& s = scenario_->sensor();
  if (!visibility_.visible(k, node)) return s.sigma;
  const Vec2 x = scenario_->grid().point(scenario_->grid().node(node));
  const Vec2 d = x - observer_[static_cast<std::size_t>(k)].position;
  return s.K0 / (dot(d, d) + kRegularizer) + s.sigma;
}

double ObservabilityField::eval(NodeIndex node, int k) const { return eval(scenario_->grid().index(node), k); }

double ObservabilityField::interpolate(Vec2 p, int k) const {
  return scenario_->grid().bilinear(p, [this, k](std::size_t idx) { return eval(idx, k); });
}

double ObservabilityField::at_point(Vec2 p, int k) const {
  const SensorModel& s = scenario_->sensor();
  const PatrolState& obs = observer_[static_cast<std::size_t>(k)];
  if (!sensor_covers(s, obs, p) || !line_of_sight(scenario_->phi(), obs.position, p)) return s.sigma;
  const Vec2 d = p - obs.position;
  return s.K0 / (dot(d, d) + kRegularizer) + s.sigma;
}

void ObservabilityField::accumulate_slice(int k, double weight, std::span<double> out) const {
  const Grid2D& g = scenario_->grid();
  const SensorModel& s = scenario_->sensor();
  const Vec2 z = observer_[static_cast<std::size_t>(k)].position;
  const double background = weight * s.sigma;
  const double gain = weight * s.K0;
  for (int j = 0; j <= g.n(); ++j) {
    for (int i = 0; i <= g.n(); ++i) {
      const std::size_t idx = g.index(i, j);
      if (visibility_.visible(k, idx)) {
        const Vec2 d = g.point(i, j) - z;
        out[idx] += gain / (dot(d, d) + kRegularizer) + background;
      } else {
        out[idx] += background;
      }
    }
  }
}

ObservabilityField build_observability_field(const Scenario& scenario, int patrol_index) {
  return ObservabilityField(scenario, patrol_index, build_visibility_volume(scenario, patrol_index));
}

std::vector<ObservabilityField> build_observability_fields(const Scenario& scenario) {
  std::vector<ObservabilityField> fields;
  fields.reserve(static_cast<std::size_t>(scenario.patrol_count()));
  for (int i = 0; i < scenario.patrol_count(); ++i) fields.push_back(build_observability_field(scenario, i));
  return fields;
}

MixedObservability::MixedObservability(ObserverPolicy lambda, std::span<const ObservabilityField> fields)
    : lambda_(std::move(lambda)), fields_(fields) {
  if (static_cast<std::size_t>(lambda_.size()) != fields_.size()) {
    throw std::invalid_argument("mixed observability: lambda size does not match the patrol count");
  }
}

double MixedObservability::eval(std::size_t node, int k) const {
  double total = 0.0;
  for (std::size_t i = 0; i < fields_.size(); ++i) {
    if (lambda_[static_cast<int>(i)] != 0.0) total += lambda_[static_cast<int>(i)] * fields_[i].eval(node, k);
  }
  return total;
}

double MixedObservability::interpolate(Vec2 p, int k) const {
  double total = 0.0;
  for (std::size_t i = 0; i < fields_.size(); ++i) {
    if (lambda_[static_cast<int>(i)] != 0.0) total += lambda_[static_cast<int>(i)] * fields_[i].interpolate(p, k);
  }
  return total;
}

double MixedObservability::at_point(Vec2 p, int k) const {
  double total = 0.0;
  for (std::size_t i = 0; i < fields_.size(); ++i) {
    if (lambda_[static_cast<int>(i)] != 0.0) total += lambda_[static_cast<int>(i)] * fields_[i].at_point(p, k);
  }
  return total;
}

void MixedObservability::fill_slice(int k, std::span<double> out) const {
  std::fill(out.begin(), out.end(), 0.0);
  for (std::size_t i = 0; i < fields_.size(); ++i) {
    if (lambda_[static_cast<int>(i)] != 0.0) fields_[i].accumulate_slice(k, lambda_[static_cast<int>(i)], out);
  }
}

CostVector integrate_costs(const Trajectory& traj, std::span<const ObservabilityField> fields) {
  CostVector costs;
  costs.reached = traj.reached;
  costs.J.assign(fields.size(), 0.0);
  if (!traj.reached) {
    costs.J.assign(fields.size(), std::numeric_limits<double>::infinity());
    return costs;
  }
  for (int m = 0; m < traj.steps(); ++m) {
    const Vec2 y = traj.points[static_cast<std::size_t>(m)];
    for (std::size_t i = 0; i < fields.size(); ++i) costs.J[i] += traj.dt * fields[i].at_point(y, m);
  }
  return costs;
}

double integrate_cost(const Trajectory& traj, const MixedObservability& mix) {
  if (!traj.reached) return std::numeric_limits<double>::infinity();
  double total = 0.0;
  for (int m = 0; m < traj.steps(); ++m) total += traj.dt * mix.at_point(traj.points[static_cast<std::size_t>(m)], m);
  return total;
}

}  // namespace seg
