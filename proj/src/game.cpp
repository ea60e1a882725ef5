#include "seg/game.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "seg/linear_program.hpp"

namespace seg {

EvaderPolicy solve_evader_policy(std::vector<CandidateTrajectory> support, const ObserverPolicy& lambda_star,
                                 double value, double supp_tol) {
  if (support.empty()) throw std::invalid_argument("solve_evader_policy: empty trajectory set");
  if (!(value > 0.0)) throw std::invalid_argument("solve_evader_policy: game value must be positive");
  EvaderPolicy policy;
  for (int i = 0; i < lambda_star.size(); ++i) {
    if (lambda_star[i] > supp_tol) policy.active_patrols.push_back(i);
  }
  const std::size_t count = support.size();

  // Variables: theta_1..theta_A, t.  minimize t
  //   +- (sum_a theta_a J_{a,i} / value - 1) <= t   for i in I,   sum theta = 1.
  LinearProgram lp;
  lp.c.assign(count + 1, 0.0);
  lp.c[count] = 1.0;
  for (int i : policy.active_patrols) {
    std::vector<double> plus(count + 1, 0.0);
    std::vector<double> minus(count + 1, 0.0);
    for (std::size_t a = 0; a < count; ++a) {
      const double rel = support[a].costs.J[static_cast<std::size_t>(i)] / value;
      plus[a] = rel;
      minus[a] = -rel;
    }
    plus[count] = -1.0;
    minus[count] = -1.0;
    lp.a_ub.push_back(std::move(plus));
    lp.b_ub.push_back(1.0);
    lp.a_ub.push_back(std::move(minus));
    lp.b_ub.push_back(-1.0);
  }
  std::vector<double> simplex_row(count + 1, 1.0);
  simplex_row[count] = 0.0;
  lp.a_eq.push_back(std::move(simplex_row));
  lp.b_eq.push_back(1.0);

  const auto sol = solve_lp(lp);
  if (!sol) throw std::runtime_error("solve_evader_policy: linear program failed");
  policy.theta.assign(sol->x.begin(), sol->x.begin() + static_cast<std::ptrdiff_t>(count));
  for (double& t : policy.theta) t = std::max(t, 0.0);
  double sum = 0.0;
  for (double t : policy.theta) sum += t;
  for (double& t : policy.theta) t /= sum;
  policy.support = std::move(support);

  policy.residual = 0.0;
  for (int i : policy.active_patrols) {
    double expected = 0.0;
    for (std::size_t a = 0; a < count; ++a) expected += policy.theta[a] * policy.support[a].costs.J[static_cast<std::size_t>(i)];
    policy.residual = std::max(policy.residual, std::abs(expected - value) / value);
  }
  return policy;
}

NashCertificate certify_equilibrium(const EvaderPolicy& evader, const ObserverPolicy& lambda_star, double value,
                                    const SolverParams& params) {
  NashCertificate cert;
  const int r = lambda_star.size();
  std::vector<double> expected(static_cast<std::size_t>(r), 0.0);
  for (std::size_t a = 0; a < evader.support.size(); ++a) {
    for (int i = 0; i < r; ++i) {
      expected[static_cast<std::size_t>(i)] += evader.theta[a] * evader.support[a].costs.J[static_cast<std::size_t>(i)];
    }
  }
  cert.deviation_residual = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < r; ++i) {
    const double rel = (expected[static_cast<std::size_t>(i)] - value) / value;
    cert.deviation_residual = std::max(cert.deviation_residual, rel);
  }
  for (int i : evader.active_patrols) {
    cert.support_residual = std::max(cert.support_residual, std::abs(expected[static_cast<std::size_t>(i)] - value) / value);
  }
  for (const auto& c : evader.support) {
    cert.optimality_residual = std::max(cert.optimality_residual, std::abs(c.lambda_star_cost - value) / value);
  }
  cert.deterministic = evader.support.size() == 1;
  cert.certified = cert.support_residual <= params.nash_tol && cert.deviation_residual <= params.nash_tol &&
                   cert.optimality_residual <= params.opt_tol;
  return cert;
}

SurveillanceGame::SurveillanceGame(const Scenario& scenario)
    : SurveillanceGame(scenario, build_observability_fields(scenario)) {}

SurveillanceGame::SurveillanceGame(const Scenario& scenario, std::vector<ObservabilityField> fields)
    : scenario_(&scenario), fields_(std::move(fields)) {
  if (static_cast<int>(fields_.size()) != scenario.patrol_count()) {
    throw std::invalid_argument("surveillance game: one observability field per patrol is required");
  }
}

BestResponse SurveillanceGame::best_response(const ObserverPolicy& lambda) {
  const MixedObservability mix(lambda, fields_);
  return best_response_cost(mix, *scenario_, workspace_);
}

GEvaluation SurveillanceGame::evaluate_G(const ObserverPolicy& lambda) {
  BestResponse br = best_response(lambda);
  GEvaluation ev{lambda, br.value, br.costs.J, std::move(br.trajectory), br.residual};
  return ev;
}

AscentResult SurveillanceGame::maximize_G() {
  const SolverParams& params = scenario_->solver();
  const int r = patrol_count();
  AscentResult result{evaluate_G(ObserverPolicy::uniform(r)), {}, {}};
  result.trace.push_back({0, result.best.value, result.best.lambda.weights()});
  result.evaluations.push_back(result.best);
  if (r == 1) return result;

  auto record = [&](GEvaluation ev) {
    result.trace.push_back({static_cast<int>(result.trace.size()), ev.value, ev.lambda.weights()});
    if (ev.value > result.best.value) result.best = ev;
    result.evaluations.push_back(std::move(ev));
  };

  const GEvaluation& first = result.evaluations.front();
  const double g_max = *std::max_element(first.supergradient.begin(), first.supergradient.end());
  const double c = params.step_c / g_max;
  std::vector<double> best_history{result.best.value};

  for (int q = 0; q < params.max_iters; ++q) {
    const GEvaluation& current = result.evaluations.back();
    const double step = c / std::sqrt(static_cast<double>(q + 1));
    std::vector<double> moved(static_cast<std::size_t>(r));
    for (int i = 0; i < r; ++i) {
      moved[static_cast<std::size_t>(i)] = current.lambda[i] + step * current.supergradient[static_cast<std::size_t>(i)];
    }
    record(evaluate_G(project_simplex(moved)));
    best_history.push_back(result.best.value);

    const std::size_t w = static_cast<std::size_t>(params.window);
    if (best_history.size() > w) {
      const double old_best = best_history[best_history.size() - 1 - w];
      if (result.best.value - old_best <= params.grad_tol * std::abs(result.best.value)) break;
    }
  }
  return result;
}

CandidateTrajectory SurveillanceGame::candidate_from(const BestResponse& br, const ObserverPolicy& source,
                                                     const ObserverPolicy& lambda_star) const {
  CandidateTrajectory c{br.trajectory, br.costs, source.weights(), 0.0};
  c.lambda_star_cost = br.costs.weighted(lambda_star.weights());
  return c;
}

std::vector<CandidateTrajectory> SurveillanceGame::collect_optimal_trajectories(const GEvaluation& at_lambda_star) {
  const double delta = scenario_->solver().perturbation;
  return collect_optimal_trajectories(at_lambda_star, std::span<const double>(&delta, 1));
}

std::vector<CandidateTrajectory> SurveillanceGame::collect_optimal_trajectories(const GEvaluation& at_lambda_star,
                                                                                std::span<const double> magnitudes,
                                                                                std::span<const GEvaluation> nearby) {
  const SolverParams& params = scenario_->solver();
  const ObserverPolicy& lambda_star = at_lambda_star.lambda;
  const double value = at_lambda_star.value;
  const int r = patrol_count();

  std::vector<CandidateTrajectory> candidates;
  {
    CostVector costs = integrate_costs(at_lambda_star.trajectory, fields_);
    CandidateTrajectory c{at_lambda_star.trajectory, costs, lambda_star.weights(), costs.weighted(lambda_star.weights())};
    candidates.push_back(std::move(c));
  }
  for (const auto& ev : nearby) {
    CostVector costs = integrate_costs(ev.trajectory, fields_);
    CandidateTrajectory c{ev.trajectory, costs, ev.lambda.weights(), costs.weighted(lambda_star.weights())};
    candidates.push_back(std::move(c));
  }
  for (double magnitude : magnitudes) {
    const double scale = magnitude / std::numbers::sqrt2;
    for (int i = 0; i < r; ++i) {
      for (int j = i + 1; j < r; ++j) {
        for (double sign : {1.0, -1.0}) {
          std::vector<double> moved = lambda_star.weights();
          moved[static_cast<std::size_t>(i)] += sign * scale;
          moved[static_cast<std::size_t>(j)] -= sign * scale;
          const ObserverPolicy perturbed = project_simplex(moved);
          candidates.push_back(candidate_from(cached_best_response(perturbed), perturbed, lambda_star));
        }
      }
    }
  }

  // Single-linkage clusters; the representative is the member with the lowest lambda*-cost.
  const double threshold = scenario_->cluster_dist();
  std::vector<std::vector<std::size_t>> clusters;
  for (std::size_t k = 0; k < candidates.size(); ++k) {
    if (!candidates[k].costs.reached) continue;
    std::vector<std::size_t> joined;
    for (std::size_t c = 0; c < clusters.size(); ++c) {
      for (std::size_t member : clusters[c]) {
        if (trajectory_distance(candidates[k].trajectory, candidates[member].trajectory) <= threshold) {
          joined.push_back(c);
          break;
        }
      }
    }
    if (joined.empty()) {
      clusters.push_back({k});
      continue;
    }
    auto& target = clusters[joined.front()];
    target.push_back(k);
    for (auto it = joined.rbegin(); it != joined.rend() - 1; ++it) {
      target.insert(target.end(), clusters[*it].begin(), clusters[*it].end());
      clusters.erase(clusters.begin() + static_cast<std::ptrdiff_t>(*it));
    }
  }

  std::vector<CandidateTrajectory> kept;
  for (const auto& cluster : clusters) {
    std::size_t rep = cluster.front();
    for (std::size_t member : cluster) {
      if (candidates[member].lambda_star_cost < candidates[rep].lambda_star_cost) rep = member;
    }
    if (std::abs(candidates[rep].lambda_star_cost - value) <= params.opt_tol * value) kept.push_back(candidates[rep]);
  }
  if (kept.empty()) kept.push_back(candidates.front());

  if (static_cast<int>(kept.size()) > r) {
    // Greedy max-min spread starting from the cheapest member.
    std::sort(kept.begin(), kept.end(),
              [](const auto& a, const auto& b) { return a.lambda_star_cost < b.lambda_star_cost; });
    std::vector<CandidateTrajectory> chosen{kept.front()};
    std::vector<bool> used(kept.size(), false);
    used[0] = true;
    while (static_cast<int>(chosen.size()) < r) {
      std::size_t pick = 0;
      double pick_dist = -1.0;
      for (std::size_t k = 0; k < kept.size(); ++k) {
        if (used[k]) continue;
        double nearest = std::numeric_limits<double>::infinity();
        for (const auto& c : chosen) nearest = std::min(nearest, trajectory_distance(kept[k].trajectory, c.trajectory));
        if (nearest > pick_dist) {
          pick_dist = nearest;
          pick = k;
        }
      }
      used[pick] = true;
      chosen.push_back(kept[pick]);
    }
    kept = std::move(chosen);
  }
  return kept;
}

const BestResponse& SurveillanceGame::cached_best_response(const ObserverPolicy& lambda) {
  auto it = cache_.find(lambda.weights());
  if (it == cache_.end()) it = cache_.emplace(lambda.weights(), best_response(lambda)).first;
  return it->second;
}

GameSolution SurveillanceGame::solve() {
  const SolverParams& params = scenario_->solver();
  AscentResult ascent = maximize_G();
  GameSolution sol{ascent.best.lambda, ascent.best.value, {}, {}, std::move(ascent.trace)};
  std::vector<double> magnitudes;
  for (int level = 0; level <= kPerturbationDoublings; ++level) {
    magnitudes.push_back(params.perturbation * std::ldexp(1.0, level));
    std::vector<GEvaluation> nearby;
    for (const auto& ev : ascent.evaluations) {
      double d2 = 0.0;
      for (int i = 0; i < patrol_count(); ++i) d2 += std::pow(ev.lambda[i] - sol.lambda_star[i], 2);
      if (d2 > 0.0 && std::sqrt(d2) <= magnitudes.back()) nearby.push_back(ev);
    }
    sol.evader = solve_evader_policy(collect_optimal_trajectories(ascent.best, magnitudes, nearby), sol.lambda_star,
                                     sol.value, params.supp_tol);
    sol.certificate = certify_equilibrium(sol.evader, sol.lambda_star, sol.value, params);
    if (sol.certificate.certified) break;
  }
  cache_.clear();
  return sol;
}

}  // namespace seg
