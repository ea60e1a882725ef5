#pragma once

#include <optional>
#include <vector>

namespace seg {

// minimize c.x  subject to  A_ub x <= b_ub,  A_eq x = b_eq,  x >= 0.
// Matrices are dense row lists; sizes must agree with c.
struct LinearProgram {
  std::vector<double> c;
  std::vector<std::vector<double>> a_ub;
  std::vector<double> b_ub;
  std::vector<std::vector<double>> a_eq;
  std::vector<double> b_eq;
};

struct LpSolution {
  std::vector<double> x;
  double objective = 0.0;
};

// Two-phase tableau simplex with Bland's rule. Empty when infeasible or
// unbounded. Intended for the handful of variables the evader mixture needs.
std::optional<LpSolution> solve_lp(const LinearProgram& lp);

}  // namespace seg
