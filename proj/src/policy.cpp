#include "seg/policy.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <stdexcept>

namespace seg {

ObserverPolicy::ObserverPolicy(std::vector<double> weights) : weights_(std::move(weights)) {
  if (weights_.empty()) throw std::invalid_argument("observer policy: empty weight vector");
  double sum = 0.0;
  for (double w : weights_) {
    if (!(w >= 0.0)) throw std::invalid_argument("observer policy: weights must be non-negative");
    sum += w;
  }
  if (!(sum > 0.0)) throw std::invalid_argument("observer policy: weights must have a positive sum");
  for (double& w : weights_) w /= sum;
}

ObserverPolicy ObserverPolicy::uniform(int r) { return ObserverPolicy(std::vector<double>(static_cast<std::size_t>(r), 1.0)); }

ObserverPolicy ObserverPolicy::vertex(int r, int i) {
  std::vector<double> w(static_cast<std::size_t>(r), 0.0);
  w.at(static_cast<std::size_t>(i)) = 1.0;
  return ObserverPolicy(std::move(w));
}

ObserverPolicy project_simplex(std::span<const double> v) {
  if (v.empty()) throw std::invalid_argument("project_simplex: empty vector");
  std::vector<double> u(v.begin(), v.end());
  std::sort(u.begin(), u.end(), std::greater<>());
  double running = 0.0;
  double tau = 0.0;
  for (std::size_t k = 0; k < u.size(); ++k) {
    running += u[k];
    const double candidate = (running - 1.0) / static_cast<double>(k + 1);
    if (u[k] - candidate > 0.0) tau = candidate;
  }
  std::vector<double> x(v.size());
  std::transform(v.begin(), v.end(), x.begin(), [tau](double vi) { return std::max(vi - tau, 0.0); });
  return ObserverPolicy(std::move(x));
}

}  // namespace seg
