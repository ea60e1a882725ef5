#pragma once

#include <stdexcept>

#include "seg/hjb.hpp"
#include "seg/observability.hpp"
#include "seg/trajectory.hpp"

namespace seg {

class Scenario;

class TraceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Semi-Lagrangian descent through U from (x_S, 0):
//   y^{m+1} = argmin over a in {n_dir unit vectors} u {0} of U~(y^m + dt f(y^m) a, t_{m+1}).
// Candidates with interpolated phi < 0 or with an unreached corner in U~ are
// skipped; ties go to the lowest direction index, the stay-in-place control comes last.
// The path ends with a straight hop once |y^m - x_T| <= f(y^m) dt, or fails
// (reached = false) when the deadline slice is hit first.
Trajectory trace_path(const ValueFunction& u, const Scenario& scenario, int n_dir);
Trajectory trace_path(const ValueFunction& u, const Scenario& scenario);

struct BestResponse {
  Trajectory trajectory;
  CostVector costs;
  double value = 0.0;     // U(x_S, 0)
  double residual = 0.0;  // |lambda . J - value| / value
};

// Evader's best response to a fixed observer mixture. `workspace` is reused
// for the value function and holds it on return.
BestResponse best_response_cost(const MixedObservability& mix, const Scenario& scenario, ValueFunction& workspace);
BestResponse best_response_cost(const MixedObservability& mix, const Scenario& scenario);

}  // namespace seg
