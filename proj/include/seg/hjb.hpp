#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "seg/geometry.hpp"

namespace seg {

class Scenario;

// Finite stand-in for +infinity; arithmetic saturates at this value.
inline constexpr double kInfCap = 1e9;
inline bool is_inf_cap(double v) { return v >= kInfCap; }

// Values of U on the nine-point stencil around one node. The ring runs
// counterclockwise from +x: E, NE, N, NW, W, SW, S, SE. Simplex l (1..8)
// is spanned by one axis neighbour and one diagonal neighbour:
//   1: E,NE  2: N,NE  3: N,NW  4: W,NW  5: W,SW  6: S,SW  7: S,SE  8: E,SE
struct StencilSlice {
  double center = kInfCap;
  std::array<double, 8> ring{kInfCap, kInfCap, kInfCap, kInfCap, kInfCap, kInfCap, kInfCap, kInfCap};
};

struct SimplexGradient {
  double ux = 0.0;
  double uy = 0.0;
  bool upwind = false;  // gradient points out of this simplex
  double d = 0.0;       // approximation of |grad u| used by the update
};

SimplexGradient simplex_gradient(const StencilSlice& stencil, int simplex, double h);

// U_l = U_c - dt f D + dt K for simplex l, saturated at kInfCap. D is the
// two-sided |grad| when the upwinding condition holds and the one-sided
// semi-Lagrangian max((U_c - U_1)/|dx_1|, (U_c - U_2)/|dx_2|, 0) otherwise.
// A kInfCap centre takes U_axis + dt K when dt f reaches the axis neighbour,
// U_c - dt f (U_c - U_axis)/h + dt K when it falls short, and kInfCap without
// a finite axis neighbour; the diagonal never feeds an unreached node.
double simplex_update(const StencilSlice& stencil, int simplex, double f, double K, double dt, double h);

// Static per-scenario data of the explicit scheme.
struct HjbDomain {
  Grid2D grid;
  double dt = 0.0;
  std::vector<double> speed;
  std::vector<std::uint8_t> inside;  // node belongs to the closed free space
  std::size_t target = 0;

  static HjbDomain from(const Scenario& scenario);
};

// One backward step, U^{k-1} from U^k and K(., t_k).
void step_backward(const HjbDomain& domain, std::span<const double> u_k, std::span<const double> k_slice,
                   std::span<double> u_prev);

// Space-time value function U[k][node], single precision.
class ValueFunction {
 public:
  ValueFunction() = default;
  ValueFunction(const Grid2D& grid, const TimeGrid& time);

  const Grid2D& grid() const { return *grid_; }
  const TimeGrid& time() const { return *time_; }
  bool empty() const { return values_.empty(); }

  double at(int k, std::size_t node) const { return values_[offset(k) + node]; }
  double at(int k, NodeIndex node) const { return at(k, grid_->index(node)); }
  std::span<const float> slice(int k) const;
  std::span<float> slice(int k);

  // Bilinear in space on slice k; empty if any corner is kInfCap.
  std::optional<double> interpolate(Vec2 p, int k) const;
  // Trilinear in (x, y, t); empty if any corner is kInfCap.
  std::optional<double> interpolate(Vec2 p, double t) const;

 private:
  std::size_t offset(int k) const { return static_cast<std::size_t>(k) * grid_->node_count(); }

  std::optional<Grid2D> grid_;
  std::optional<TimeGrid> time_;
  std::vector<float> values_;
};

// Fills out[node] with the running cost K(node, t_k).
using CostSliceSource = std::function<void(int k, std::span<double> out)>;

// Terminal condition at k = n_t, then backward steps down to k = 0.
void solve_value_function(const CostSliceSource& cost, const Scenario& scenario, ValueFunction& out);
ValueFunction solve_value_function(const CostSliceSource& cost, const Scenario& scenario);

}  // namespace seg
