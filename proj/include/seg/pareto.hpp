#pragma once

#include <vector>

#include "seg/game.hpp"

namespace seg {

struct ParetoPoint {
  ObserverPolicy lambda;
  CostVector costs;
  double value = 0.0;  // u^lambda(x_S, 0)
  Trajectory trajectory;
};

// Best responses for n_lambdas policies evenly spaced on the edge of the
// simplex between patrols i and j, sorted by increasing lambda_i.
std::vector<ParetoPoint> sweep_pareto(SurveillanceGame& game, int n_lambdas, int i, int j);

// Drops points whose costs are all larger than another point's by more than
// rel_tol (relative).
std::vector<ParetoPoint> filter_dominated(std::vector<ParetoPoint> points, double rel_tol);

}  // namespace seg
