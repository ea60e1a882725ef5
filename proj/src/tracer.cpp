#include "seg/tracer.hpp"

#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include "seg/scenario.hpp"

namespace seg {

Trajectory trace_path(const ValueFunction& u, const Scenario& scenario, int n_dir) {
  const TimeGrid& time = scenario.time();
  const LevelSetField& phi = scenario.phi();
  const Vec2 target = scenario.target();
  const double dt = time.dt();

  if (is_inf_cap(u.at(0, scenario.start_node()))) {
    throw TraceError("start is unreachable before the deadline");
  }

  std::vector<Vec2> controls;
  controls.reserve(static_cast<std::size_t>(n_dir) + 1);
  for (int d = 0; d < n_dir; ++d) {
    const double angle = kTwoPi * d / n_dir;
    controls.push_back({std::cos(angle), std::sin(angle)});
  }
  controls.push_back({0.0, 0.0});

  Trajectory traj;
  traj.dt = dt;
  Vec2 y = scenario.start();
  traj.points.push_back(y);

  for (int m = 0;; ++m) {
    const double f = scenario.speed_at(y);
    if (distance(y, target) <= f * dt + 1e-12) {
      if (!(y == target)) traj.points.push_back(target);
      traj.reached = true;
      return traj;
    }
    if (m >= time.steps()) return traj;

    double best = std::numeric_limits<double>::infinity();
    Vec2 next = y;
    bool found = false;
    for (const Vec2& a : controls) {
      const Vec2 cand = y + (dt * f) * a;
      if (cand.x < 0.0 || cand.y < 0.0 || cand.x > 1.0 || cand.y > 1.0) continue;
      if (phi.interpolate(cand) < 0.0) continue;
      const auto value = u.interpolate(cand, m + 1);
      if (!value) continue;
      if (*value < best) {
        best = *value;
        next = cand;
        found = true;
      }
    }
    if (!found) throw TraceError("trapped: no admissible control at step " + std::to_string(m));
    y = next;
    traj.points.push_back(y);
  }
}

Trajectory trace_path(const ValueFunction& u, const Scenario& scenario) {
  return trace_path(u, scenario, scenario.solver().n_dir);
}

BestResponse best_response_cost(const MixedObservability& mix, const Scenario& scenario, ValueFunction& workspace) {
  solve_value_function([&mix](int k, std::span<double> out) { mix.fill_slice(k, out); }, scenario, workspace);
  BestResponse br;
  br.value = workspace.at(0, scenario.start_node());
  br.trajectory = trace_path(workspace, scenario);
  br.costs = integrate_costs(br.trajectory, mix.fields());
  const double weighted = br.costs.weighted(mix.lambda().weights());
  br.residual = br.value > 0.0 ? std::abs(weighted - br.value) / br.value : std::abs(weighted);
  return br;
}

BestResponse best_response_cost(const MixedObservability& mix, const Scenario& scenario) {
  ValueFunction workspace;
  return best_response_cost(mix, scenario, workspace);
}

}  // namespace seg
