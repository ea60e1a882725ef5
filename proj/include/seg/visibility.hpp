#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "seg/geometry.hpp"
#include "seg/level_set.hpp"
#include "seg/patrol.hpp"

namespace seg {

class Scenario;

// Reusable node ordering for occlusion solves on one grid.
class VisibilitySweep {
 public:
  explicit VisibilitySweep(const Grid2D& grid);
  const Grid2D& grid() const { return grid_; }
  // Node indices by non-decreasing distance from z, ties by index.
  std::span<const std::uint32_t> order_from(Vec2 z);

 private:
  Grid2D grid_;
  std::vector<std::pair<double, std::uint32_t>> keys_;
  std::vector<std::uint32_t> order_;
};

// Upwind solution of max{grad psi . r, psi - phi} = 0 for an observer at z,
// r the unit vector pointing away from z. Nodes are swept in order of
// distance from z; each takes the minimum of phi at the node, phi halfway
// along its back-step and psi advected from its two upwind neighbours,
// linearly interpolated where the ray back to z crosses the next grid line.
// Within one cell of z the advected value is phi(z). {psi >= 0} is the
// unoccluded region.
void solve_visibility_qvi(const LevelSetField& phi, Vec2 z, VisibilitySweep& sweep, std::span<double> psi);
std::vector<double> solve_visibility_qvi(const LevelSetField& phi, Vec2 z);

// Brute-force line of sight: bilinear phi > 0 at `samples` equally spaced
// points of the segment [z, x], endpoints included.
bool visible_oracle(const LevelSetField& phi, Vec2 z, Vec2 x, int samples);

// Line of sight to an arbitrary point, sampled every h/2 along [z, x].
// Points of the boundary band (-h/2 <= phi(x) <= 0) count as seen when the
// segment stays at phi >= -h/2, all other points need phi > 0 throughout.
bool line_of_sight(const LevelSetField& phi, Vec2 z, Vec2 x);

// Closed angular sector of width alpha centred on the heading.
bool sector_mask(Vec2 z, Vec2 heading, double alpha, Vec2 x);

struct SensorModel;

// Sector and range restrictions of the sensor, without occlusion.
bool sensor_covers(const SensorModel& sensor, const PatrolState& observer, Vec2 x);

// mask: free nodes (phi > 0) with psi >= 0, plus boundary-band nodes
// (-h/2 <= phi <= 0) whose psi >= -h/2, i.e. seen without the ray passing
// deeper than the band; the band belongs to the evader's domain.
struct VisibilitySlice {
  std::vector<double> psi;
  std::vector<std::uint8_t> mask;
};

VisibilitySlice compute_visibility_slice(const Scenario& scenario, const PatrolState& observer,
                                         VisibilitySweep& sweep);

// Packed visibility bitmasks, one per time slice, for one patrol.
class VisibilityVolume {
 public:
  VisibilityVolume(const Grid2D& grid, int slice_count);

  const Grid2D& grid() const { return grid_; }
  int slice_count() const { return slice_count_; }

  bool visible(int k, std::size_t node) const {
    return (bits_[word_index(k, node)] >> (node % 64)) & 1u;
  }
  void set(int k, std::size_t node, bool value);
  void assign_slice(int k, std::span<const std::uint8_t> mask);
  std::size_t visible_count(int k) const;
  std::size_t byte_size() const { return bits_.size() * sizeof(std::uint64_t); }

 private:
  std::size_t word_index(int k, std::size_t node) const {
    return static_cast<std::size_t>(k) * words_per_slice_ + node / 64;
  }

  Grid2D grid_;
  int slice_count_;
  std::size_t words_per_slice_;
  std::vector<std::uint64_t> bits_;
};

VisibilityVolume build_visibility_volume(const Scenario& scenario, int patrol_index);

}  // namespace seg
