#include "seg/visibility.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "seg/parallel.hpp"
#include "seg/scenario.hpp"

namespace seg {

VisibilitySweep::VisibilitySweep(const Grid2D& grid)
    : grid_(grid), keys_(grid.node_count()), order_(grid.node_count()) {}

std::span<const std::uint32_t> VisibilitySweep::order_from(Vec2 z) {
  for (std::size_t idx = 0; idx < keys_.size(); ++idx) {
    const Vec2 d = grid_.point(grid_.node(idx)) - z;
    keys_[idx] = {dot(d, d), static_cast<std::uint32_t>(idx)};
  }
  std::sort(keys_.begin(), keys_.end());
  for (std::size_t q = 0; q < keys_.size(); ++q) order_[q] = keys_[q].second;
  return order_;
}

void solve_visibility_qvi(const LevelSetField& phi, Vec2 z, VisibilitySweep& sweep, std::span<double> psi) {
  const Grid2D& g = phi.grid();
  const int n = g.n();
  const double h = g.h();
  const double phi_z = phi.interpolate(z);
  for (const std::uint32_t idx : sweep.order_from(z)) {
    const NodeIndex node = g.node(idx);
    const Vec2 x = g.point(node);
    const double a = x.x - z.x;
    const double b = x.y - z.y;
    const double reach = std::max(std::abs(a), std::abs(b));
    double back = phi_z;
    if (reach > h) {
      // The upwind neighbours were swept earlier: both are strictly closer to z.
      const double s = h / reach;
      if (std::abs(a) >= std::abs(b)) {
        const int i = node.i - (a > 0.0 ? 1 : -1);
        const double fy = (x.y - s * b) / h;
        const int j0 = std::clamp(static_cast<int>(std::floor(fy)), 0, n - 1);
        const double t = fy - j0;
        back = (1.0 - t) * psi[g.index(i, j0)] + t * psi[g.index(i, j0 + 1)];
      } else {
        const int j = node.j - (b > 0.0 ? 1 : -1);
        const double fx = (x.x - s * a) / h;
        const int i0 = std::clamp(static_cast<int>(std::floor(fx)), 0, n - 1);
        const double t = fx - i0;
        back = (1.0 - t) * psi[g.index(i0, j)] + t * psi[g.index(i0 + 1, j)];
      }
    }
    const double halfway = phi.interpolate(x - (0.5 * std::min(1.0, h / std::max(reach, h))) * (x - z));
    psi[idx] = std::min({phi.at(idx), halfway, back});
  }
}

std::vector<double> solve_visibility_qvi(const LevelSetField& phi, Vec2 z) {
  std::vector<double> psi(phi.grid().node_count());
  VisibilitySweep sweep(phi.grid());
  solve_visibility_qvi(phi, z, sweep, psi);
  return psi;
}

bool visible_oracle(const LevelSetField& phi, Vec2 z, Vec2 x, int samples) {
  for (int s = 0; s < samples; ++s) {
    const double t = samples > 1 ? static_cast<double>(s) / (samples - 1) : 0.0;
    if (!(phi.interpolate(z + t * (x - z)) > 0.0)) return false;
  }
  return true;
}

bool line_of_sight(const LevelSetField& phi, Vec2 z, Vec2 x) {
  const double h = phi.grid().h();
  const double band = 0.5 * h;
  const double end_level = phi.interpolate(x);
  if (end_level < -band) return false;
  const int samples = static_cast<int>(std::ceil(distance(z, x) / band)) + 2;
  for (int s = 0; s < samples; ++s) {
    const double level = phi.interpolate(z + (static_cast<double>(s) / (samples - 1)) * (x - z));
    if (end_level > 0.0 ? !(level > 0.0) : level < -band) return false;
  }
  return true;
}

bool sector_mask(Vec2 z, Vec2 heading, double alpha, Vec2 x) {
  if (alpha >= kTwoPi) return true;
  const Vec2 d = x - z;
  if (d.x == 0.0 && d.y == 0.0) return true;
  const double angle = std::atan2(std::abs(cross(heading, d)), dot(heading, d));
  return angle <= 0.5 * alpha + 1e-12;
}

bool sensor_covers(const SensorModel& sensor, const PatrolState& observer, Vec2 x) {
  if (sensor.max_range && distance(x, observer.position) > *sensor.max_range) return false;
  return sector_mask(observer.position, observer.heading, sensor.alpha, x);
}

VisibilitySlice compute_visibility_slice(const Scenario& scenario, const PatrolState& observer,
                                         VisibilitySweep& sweep) {
  const LevelSetField& phi = scenario.phi();
  const Grid2D& g = phi.grid();
  VisibilitySlice slice;
  slice.psi.resize(g.node_count());
  slice.mask.assign(g.node_count(), 0);
  solve_visibility_qvi(phi, observer.position, sweep, slice.psi);
  const double band = 0.5 * g.h();
  for (int j = 0; j <= g.n(); ++j) {
    for (int i = 0; i <= g.n(); ++i) {
      const std::size_t idx = g.index(i, j);
      const double level = phi.at(idx);
      const bool unoccluded = level > 0.0 ? slice.psi[idx] >= 0.0 : (level >= -band && slice.psi[idx] >= -band);
      if (unoccluded && sensor_covers(scenario.sensor(), observer, g.point(i, j))) {
        slice.mask[idx] = 1;
      }
    }
  }
  return slice;
}

VisibilityVolume::VisibilityVolume(const Grid2D& grid, int slice_count)
    : grid_(grid),
      slice_count_(slice_count),
      words_per_slice_((grid.node_count() + 63) / 64),
      bits_(words_per_slice_ * static_cast<std::size_t>(slice_count), 0) {}

void VisibilityVolume::set(int k, std::size_t node, bool value) {
  const std::uint64_t bit = std::uint64_t{1} << (node % 64);
  auto& word = bits_[word_index(k, node)];
  word = value ? (word | bit) : (word & ~bit);
}

void VisibilityVolume::assign_slice(int k, std::span<const std::uint8_t> mask) {
  const std::size_t base = static_cast<std::size_t>(k) * words_per_slice_;
  std::fill_n(bits_.begin() + static_cast<std::ptrdiff_t>(base), words_per_slice_, 0);
  for (std::size_t node = 0; node < mask.size(); ++node) {
    if (mask[node]) bits_[base + node / 64] |= std::uint64_t{1} << (node % 64);
  }
}

std::size_t VisibilityVolume::visible_count(int k) const {
  const std::size_t base = static_cast<std::size_t>(k) * words_per_slice_;
  std::size_t count = 0;
  for (std::size_t w = 0; w < words_per_slice_; ++w) count += std::popcount(bits_[base + w]);
  return count;
}

VisibilityVolume build_visibility_volume(const Scenario& scenario, int patrol_index) {
  const Grid2D& g = scenario.grid();
  const TimeGrid& time = scenario.time();
  const PatrolTrajectory& patrol = scenario.patrols()[static_cast<std::size_t>(patrol_index)];
  VisibilityVolume volume(g, time.slice_count());
  // Slices only write their own words; the word ranges never overlap.
  parallel_for(0, static_cast<std::size_t>(time.slice_count()), [&](std::size_t lo, std::size_t hi) {
    VisibilitySweep sweep(g);
    for (std::size_t k = lo; k < hi; ++k) {
      const int slice = static_cast<int>(k);
      const PatrolState observer = patrol_state(patrol, time.time(slice));
      const VisibilitySlice vs = compute_visibility_slice(scenario, observer, sweep);
      volume.assign_slice(slice, vs.mask);
    }
  });
  return volume;
}

}  // namespace seg
