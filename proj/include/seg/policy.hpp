#pragma once

#include <span>
#include <vector>

namespace seg {

// Probability vector over the patrol set. Construction clips nothing: inputs
// must be non-negative with a positive sum, and are renormalized to sum 1.
class ObserverPolicy {
 public:
  explicit ObserverPolicy(std::vector<double> weights);
  static ObserverPolicy uniform(int r);
  static ObserverPolicy vertex(int r, int i);

  int size() const { return static_cast<int>(weights_.size()); }
  double operator[](int i) const { return weights_[static_cast<std::size_t>(i)]; }
  const std::vector<double>& weights() const { return weights_; }

  friend bool operator==(const ObserverPolicy&, const ObserverPolicy&) = default;

 private:
  std::vector<double> weights_;
};

// Euclidean projection onto the probability simplex.
ObserverPolicy project_simplex(std::span<const double> v);

}  // namespace seg
