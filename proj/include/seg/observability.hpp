#pragma once

#include <span>
#include <vector>

#include "seg/patrol.hpp"
#include "seg/policy.hpp"
#include "seg/trajectory.hpp"
#include "seg/visibility.hpp"

namespace seg {

class Scenario;

// Pointwise observability K_i(x, t_k) of one patrol:
//   K0 / (|x - z_i(t_k)|^2 + 0.1) + sigma   inside the visibility set,
//   sigma                                   outside.
// Only the visibility bitmasks are stored; values are evaluated on demand.
class ObservabilityField {
 public:
  ObservabilityField(const Scenario& scenario, int patrol_index, VisibilityVolume visibility);

  int patrol_index() const { return patrol_index_; }
  const VisibilityVolume& visibility() const { return visibility_; }
  const PatrolState& observer(int k) const { return observer_[static_cast<std::size_t>(k)]; }

  double eval(std::size_t node, int k) const;
  double eval(NodeIndex node, int k) const;
  // Bilinear interpolation of the node values of slice k.
  double interpolate(Vec2 p, int k) const;
  // K at an arbitrary point: the formula and the sector test at p, with
  // occlusion by line_of_sight from the observer; used by the trajectory
  // quadrature.
  double at_point(Vec2 p, int k) const;
  // out[node] += weight * K(node, t_k) for every node.
  void accumulate_slice(int k, double weight, std::span<double> out) const;

 private:
  const Scenario* scenario_;
  int patrol_index_;
  VisibilityVolume visibility_;
  std::vector<PatrolState> observer_;
};

ObservabilityField build_observability_field(const Scenario& scenario, int patrol_index);
std::vector<ObservabilityField> build_observability_fields(const Scenario& scenario);

// K^lambda = sum_i lambda_i K_i.
class MixedObservability {
 public:
  MixedObservability(ObserverPolicy lambda, std::span<const ObservabilityField> fields);

  const ObserverPolicy& lambda() const { return lambda_; }
  std::span<const ObservabilityField> fields() const { return fields_; }

  double eval(std::size_t node, int k) const;
  double interpolate(Vec2 p, int k) const;
  double at_point(Vec2 p, int k) const;
  void fill_slice(int k, std::span<double> out) const;

 private:
  ObserverPolicy lambda_;
  std::span<const ObservabilityField> fields_;
};

// Left-endpoint quadrature J_i = sum_m dt K_i(y^m, t_m) up to arrival, with
// K evaluated pointwise (ObservabilityField::at_point).
// A trajectory that never reached the target costs +infinity.
CostVector integrate_costs(const Trajectory& traj, std::span<const ObservabilityField> fields);
double integrate_cost(const Trajectory& traj, const MixedObservability& mix);

}  // namespace seg
