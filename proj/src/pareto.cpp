#include "seg/pareto.hpp"

#include <stdexcept>

namespace seg {

std::vector<ParetoPoint> sweep_pareto(SurveillanceGame& game, int n_lambdas, int i, int j) {
  const int r = game.patrol_count();
  if (n_lambdas < 2) throw std::invalid_argument("pareto sweep needs at least 2 lambda values");
  if (i < 0 || j < 0 || i >= r || j >= r || i == j) throw std::invalid_argument("pareto sweep: invalid patrol pair");

  std::vector<ParetoPoint> points;
  points.reserve(static_cast<std::size_t>(n_lambdas));
  for (int k = 0; k < n_lambdas; ++k) {
    const double li = static_cast<double>(k) / (n_lambdas - 1);
    std::vector<double> w(static_cast<std::size_t>(r), 0.0);
    w[static_cast<std::size_t>(i)] = li;
    w[static_cast<std::size_t>(j)] = 1.0 - li;
    ObserverPolicy lambda(std::move(w));
    BestResponse br = game.best_response(lambda);
    points.push_back({std::move(lambda), std::move(br.costs), br.value, std::move(br.trajectory)});
  }
  return points;
}

std::vector<ParetoPoint> filter_dominated(std::vector<ParetoPoint> points, double rel_tol) {
  auto dominates = [rel_tol](const CostVector& a, const CostVector& b) {
    for (std::size_t i = 0; i < a.J.size(); ++i) {
      if (!(a.J[i] * (1.0 + rel_tol) < b.J[i])) return false;
    }
    return true;
  };
  std::vector<bool> dominated(points.size(), false);
  for (std::size_t p = 0; p < points.size(); ++p) {
    for (std::size_t q = 0; q < points.size() && !dominated[p]; ++q) {
      dominated[p] = q != p && dominates(points[q].costs, points[p].costs);
    }
  }
  std::vector<ParetoPoint> kept;
  for (std::size_t p = 0; p < points.size(); ++p) {
    if (!dominated[p]) kept.push_back(std::move(points[p]));
  }
  return kept;
}

}  // namespace seg
