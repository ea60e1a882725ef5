#include "seg/hjb.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "seg/parallel.hpp"
#include "seg/scenario.hpp"

namespace seg {
namespace {

struct SimplexShape {
  int axis;           // ring index of the axis neighbour
  int diag;           // ring index of the diagonal neighbour
  Vec2 e;             // unit vector towards the axis neighbour
  Vec2 p;             // unit vector from the axis neighbour to the diagonal one
};

constexpr std::array<SimplexShape, 8> kSimplices{{
    {0, 1, {1, 0}, {0, 1}},
    {2, 1, {0, 1}, {1, 0}},
    {2, 3, {0, 1}, {-1, 0}},
    {4, 3, {-1, 0}, {0, 1}},
    {4, 5, {-1, 0}, {0, -1}},
    {6, 5, {0, -1}, {-1, 0}},
    {6, 7, {0, -1}, {1, 0}},
    {0, 7, {1, 0}, {0, -1}},
}};

// Ring offsets (di, dj) in StencilSlice order.
constexpr std::array<std::array<int, 2>, 8> kRing{{{1, 0}, {1, 1}, {0, 1}, {-1, 1}, {-1, 0}, {-1, -1}, {0, -1}, {1, -1}}};

const SimplexShape& shape(int simplex) {
  if (simplex < 1 || simplex > 8) throw std::out_of_range("simplex index must be in 1..8");
  return kSimplices[static_cast<std::size_t>(simplex - 1)];
}

double one_sided(double c, double a, double b, double h) {
  double d = 0.0;
  if (!is_inf_cap(a)) d = std::max(d, (c - a) / h);
  if (!is_inf_cap(b)) d = std::max(d, (c - b) / (std::numbers::sqrt2 * h));
  return d;
}

// Hot-loop version of simplex_update without the gradient bookkeeping.
// From a kInfCap centre only the axis neighbour helps: exactly when one step
// lands on it, otherwise by the one-sided partial-progress formula.
inline double update(double c, double a, double b, double h, double step_speed, double step_cost) {
  if (is_inf_cap(c)) {
    if (is_inf_cap(a)) return kInfCap;
    if (step_speed >= h * (1.0 - 1e-9)) return std::min(a + step_cost, kInfCap);
    return std::min(c - step_speed * (c - a) / h + step_cost, kInfCap);
  }
  double d;
  if (!is_inf_cap(a) && !is_inf_cap(b)) {
    const double ge = (a - c) / h;
    const double gp = (b - a) / h;
    d = (ge <= gp && gp <= 0.0) ? std::sqrt(ge * ge + gp * gp) : one_sided(c, a, b, h);
  } else {
    d = one_sided(c, a, b, h);
  }
  return std::min(c - step_speed * d + step_cost, kInfCap);
}

}  // namespace

SimplexGradient simplex_gradient(const StencilSlice& stencil, int simplex, double h) {
  const SimplexShape& s = shape(simplex);
  const double c = stencil.center;
  const double a = stencil.ring[static_cast<std::size_t>(s.axis)];
  const double b = stencil.ring[static_cast<std::size_t>(s.diag)];
  SimplexGradient g;
  const double ge = (a - c) / h;
  const double gp = (b - a) / h;
  g.ux = ge * s.e.x + gp * s.p.x;
  g.uy = ge * s.e.y + gp * s.p.y;
  g.upwind = !is_inf_cap(c) && !is_inf_cap(a) && !is_inf_cap(b) && ge <= gp && gp <= 0.0;
  g.d = g.upwind ? std::sqrt(ge * ge + gp * gp) : one_sided(c, a, b, h);
  return g;
}

double simplex_update(const StencilSlice& stencil, int simplex, double f, double K, double dt, double h) {
  const SimplexShape& s = shape(simplex);
  return update(stencil.center, stencil.ring[static_cast<std::size_t>(s.axis)],
                stencil.ring[static_cast<std::size_t>(s.diag)], h, dt * f, dt * K);
}

HjbDomain HjbDomain::from(const Scenario& scenario) {
  HjbDomain d{scenario.grid(), scenario.time().dt(), {}, {}, 0};
  d.speed.assign(scenario.speed().begin(), scenario.speed().end());
  const double half_cell = 0.5 * d.grid.h();
  d.inside.resize(d.grid.node_count());
  for (std::size_t idx = 0; idx < d.grid.node_count(); ++idx) {
    d.inside[idx] = scenario.phi().at(idx) >= -half_cell ? 1 : 0;
  }
  d.target = d.grid.index(scenario.target_node());
  return d;
}

void step_backward(const HjbDomain& domain, std::span<const double> u_k, std::span<const double> k_slice,
                   std::span<double> u_prev) {
  const Grid2D& g = domain.grid;
  const int n = g.n();
  const double h = g.h();
  const double dt = domain.dt;
  parallel_for(0, static_cast<std::size_t>(n + 1), [&](std::size_t lo, std::size_t hi) {
    std::array<double, 8> ring;
    for (int j = static_cast<int>(lo); j < static_cast<int>(hi); ++j) {
      for (int i = 0; i <= n; ++i) {
        const std::size_t idx = g.index(i, j);
        if (!domain.inside[idx]) {
          u_prev[idx] = kInfCap;
          continue;
        }
        if (idx == domain.target) {
          u_prev[idx] = 0.0;
          continue;
        }
        const double c = u_k[idx];
        bool any_finite = !is_inf_cap(c);
        for (std::size_t r = 0; r < 8; ++r) {
          const int ni = i + kRing[r][0];
          const int nj = j + kRing[r][1];
          ring[r] = (ni < 0 || nj < 0 || ni > n || nj > n) ? kInfCap : u_k[g.index(ni, nj)];
          any_finite = any_finite || !is_inf_cap(ring[r]);
        }
        if (!any_finite) {
          u_prev[idx] = kInfCap;
          continue;
        }
        const double step_speed = dt * domain.speed[idx];
        const double step_cost = dt * k_slice[idx];
        double best = kInfCap;
        for (const SimplexShape& s : kSimplices) {
          best = std::min(best, update(c, ring[static_cast<std::size_t>(s.axis)],
                                       ring[static_cast<std::size_t>(s.diag)], h, step_speed, step_cost));
        }
        u_prev[idx] = best;
      }
    }
  });
}

ValueFunction::ValueFunction(const Grid2D& grid, const TimeGrid& time)
    : grid_(grid), time_(time), values_(grid.node_count() * static_cast<std::size_t>(time.slice_count()), 0.0f) {}

std::span<const float> ValueFunction::slice(int k) const {
  return std::span<const float>(values_).subspan(offset(k), grid_->node_count());
}

std::span<float> ValueFunction::slice(int k) { return std::span<float>(values_).subspan(offset(k), grid_->node_count()); }

std::optional<double> ValueFunction::interpolate(Vec2 p, int k) const {
  const Grid2D::Cell c = grid_->locate(p);
  const std::size_t base = offset(k);
  const double v00 = values_[base + grid_->index(c.i0, c.j0)];
  const double v10 = values_[base + grid_->index(c.i0 + 1, c.j0)];
  const double v01 = values_[base + grid_->index(c.i0, c.j0 + 1)];
  const double v11 = values_[base + grid_->index(c.i0 + 1, c.j0 + 1)];
  if (is_inf_cap(v00) || is_inf_cap(v10) || is_inf_cap(v01) || is_inf_cap(v11)) return std::nullopt;
  return (1.0 - c.fy) * ((1.0 - c.fx) * v00 + c.fx * v10) + c.fy * ((1.0 - c.fx) * v01 + c.fx * v11);
}

std::optional<double> ValueFunction::interpolate(Vec2 p, double t) const {
  const double s = std::clamp(t / time_->dt(), 0.0, static_cast<double>(time_->steps()));
  const int k0 = std::min(static_cast<int>(s), time_->steps());
  const double w = s - k0;
  const auto lower = interpolate(p, k0);
  if (!lower) return std::nullopt;
  if (w == 0.0 || k0 == time_->steps()) return lower;
  const auto upper = interpolate(p, k0 + 1);
  if (!upper) return std::nullopt;
  return (1.0 - w) * *lower + w * *upper;
}

void solve_value_function(const CostSliceSource& cost, const Scenario& scenario, ValueFunction& out) {
  const Grid2D& g = scenario.grid();
  const TimeGrid& time = scenario.time();
  if (out.empty() || !(out.grid() == g) || !(out.time() == time)) out = ValueFunction(g, time);

  const HjbDomain domain = HjbDomain::from(scenario);
  std::vector<double> current(g.node_count(), kInfCap);
  std::vector<double> previous(g.node_count(), kInfCap);
  std::vector<double> k_slice(g.node_count(), 0.0);
  current[domain.target] = 0.0;

  auto store = [&](int k, const std::vector<double>& values) {
    std::span<float> dst = out.slice(k);
    std::transform(values.begin(), values.end(), dst.begin(), [](double v) { return static_cast<float>(v); });
  };

  store(time.steps(), current);
  for (int k = time.steps(); k >= 1; --k) {
    cost(k, k_slice);
    step_backward(domain, current, k_slice, previous);
    std::swap(current, previous);
    store(k - 1, current);
  }
}

ValueFunction solve_value_function(const CostSliceSource& cost, const Scenario& scenario) {
  ValueFunction out;
  solve_value_function(cost, scenario, out);
  return out;
}

}  // namespace seg
