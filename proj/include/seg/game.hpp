#pragma once

#include <map>
#include <span>
#include <vector>

#include "seg/hjb.hpp"
#include "seg/observability.hpp"
#include "seg/policy.hpp"
#include "seg/scenario.hpp"
#include "seg/tracer.hpp"

namespace seg {

// G(lambda) = u^lambda(x_S, 0) and the supergradient g_i = J_i along the
// traced lambda-optimal trajectory.
struct GEvaluation {
  ObserverPolicy lambda;
  double value = 0.0;
  std::vector<double> supergradient;
  Trajectory trajectory;
  double residual = 0.0;
};

struct AscentStep {
  int iteration = 0;
  double value = 0.0;
  std::vector<double> lambda;
};

struct AscentResult {
  GEvaluation best;
  std::vector<AscentStep> trace;
  std::vector<GEvaluation> evaluations;  // every query, in trace order
};

// A lambda*-optimal candidate for the evader's support.
struct CandidateTrajectory {
  Trajectory trajectory;
  CostVector costs;
  std::vector<double> source_lambda;  // policy whose best response produced it
  double lambda_star_cost = 0.0;      // lambda* . J
};

struct EvaderPolicy {
  std::vector<CandidateTrajectory> support;
  std::vector<double> theta;
  std::vector<int> active_patrols;  // I = {i : lambda*_i > supp_tol}
  double residual = 0.0;            // max_{i in I} |E_theta[J_i] - value| / value
};

struct NashCertificate {
  double support_residual = 0.0;      // max_{i in I} |E_theta[J_i] - G| / G
  double deviation_residual = 0.0;    // max_i (E_theta[J_i] - G) / G, observer gain from a pure patrol
  double optimality_residual = 0.0;   // max_{a in A} |lambda* . J_a - G| / G
  bool certified = false;
  bool deterministic = false;         // single supported trajectory
};

struct GameSolution {
  ObserverPolicy lambda_star;
  double value = 0.0;
  EvaderPolicy evader;
  NashCertificate certificate;
  std::vector<AscentStep> ascent;
};

// theta >= 0, sum theta = 1 minimizing max_{i in I} |sum_a theta_a J_{a,i} - value|,
// solved as a linear program on relative residuals.
EvaderPolicy solve_evader_policy(std::vector<CandidateTrajectory> support, const ObserverPolicy& lambda_star,
                                 double value, double supp_tol);

NashCertificate certify_equilibrium(const EvaderPolicy& evader, const ObserverPolicy& lambda_star, double value,
                                    const SolverParams& params);

// Owns the per-patrol observability fields and a reusable value-function
// buffer; every query re-solves the PDE for K^lambda.
class SurveillanceGame {
 public:
  explicit SurveillanceGame(const Scenario& scenario);
  SurveillanceGame(const Scenario& scenario, std::vector<ObservabilityField> fields);

  const Scenario& scenario() const { return *scenario_; }
  std::span<const ObservabilityField> fields() const { return fields_; }
  int patrol_count() const { return static_cast<int>(fields_.size()); }
  // Value function of the most recent query.
  const ValueFunction& last_value_function() const { return workspace_; }

  BestResponse best_response(const ObserverPolicy& lambda);
  GEvaluation evaluate_G(const ObserverPolicy& lambda);

  // Projected supergradient ascent from the uniform policy with steps
  // s_q = c / sqrt(q + 1), c = step_c / |g(uniform)|_inf; stops after max_iters
  // or when the best value improved by less than grad_tol (relative) over the
  // last `window` iterations. Returns the best evaluated policy.
  AscentResult maximize_G();

  // Best responses to lambda* and to lambda* +- delta (e_i - e_j)/sqrt(2) for
  // all pairs, clustered by trajectory_distance, filtered to lambda*-cost
  // within opt_tol of `value`, at most r representatives.
  std::vector<CandidateTrajectory> collect_optimal_trajectories(const GEvaluation& at_lambda_star);
  // Same, pooling the perturbations of every listed magnitude and the
  // trajectories of `nearby` evaluations.
  std::vector<CandidateTrajectory> collect_optimal_trajectories(const GEvaluation& at_lambda_star,
                                                                std::span<const double> magnitudes,
                                                                std::span<const GEvaluation> nearby = {});

  // Ascent, trajectory collection and evader mixture. When the certificate
  // fails, the perturbation magnitude is doubled (up to 2^3 delta) and the
  // enlarged candidate pool is re-solved. Ascent evaluations within the current
  // magnitude of lambda* join the pool.
  GameSolution solve();

  static constexpr int kPerturbationDoublings = 3;

 private:
  const BestResponse& cached_best_response(const ObserverPolicy& lambda);

  CandidateTrajectory candidate_from(const BestResponse& br, const ObserverPolicy& source,
                                     const ObserverPolicy& lambda_star) const;

  const Scenario* scenario_;
  std::vector<ObservabilityField> fields_;
  ValueFunction workspace_;
  std::map<std::vector<double>, BestResponse> cache_;
};

}  // namespace seg
