#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>

namespace seg {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend constexpr Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend constexpr Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend constexpr Vec2 operator*(double s, Vec2 v) { return {s * v.x, s * v.y}; }
  friend constexpr Vec2 operator*(Vec2 v, double s) { return {s * v.x, s * v.y}; }
  friend constexpr bool operator==(Vec2, Vec2) = default;
};

inline constexpr double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline constexpr double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 v) { return std::hypot(v.x, v.y); }
inline double distance(Vec2 a, Vec2 b) { return norm(a - b); }

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct NodeIndex {
  int i = 0;
  int j = 0;
  friend constexpr bool operator==(NodeIndex, NodeIndex) = default;
};

// Uniform node grid over the unit square: (n+1) x (n+1) nodes, x_{i,j} = (i h, j h).
// Flat storage is row-major in j: index = j * side + i.
class Grid2D {
 public:
  explicit Grid2D(int n);

  int n() const { return n_; }
  int side() const { return n_ + 1; }
  double h() const { return h_; }
  std::size_t node_count() const { return static_cast<std::size_t>(side()) * side(); }

  std::size_t index(int i, int j) const {
    return static_cast<std::size_t>(j) * side() + static_cast<std::size_t>(i);
  }
  std::size_t index(NodeIndex node) const { return index(node.i, node.j); }
  NodeIndex node(std::size_t index) const {
    return {static_cast<int>(index % side()), static_cast<int>(index / side())};
  }
  bool contains(int i, int j) const { return i >= 0 && j >= 0 && i <= n_ && j <= n_; }

  Vec2 point(int i, int j) const {
    return {static_cast<double>(i) / n_, static_cast<double>(j) / n_};
  }
  Vec2 point(NodeIndex node) const { return point(node.i, node.j); }

  NodeIndex nearest(Vec2 p) const;

  // Lower-left corner of the cell containing p (clamped to the square) and
  // the fractional offsets inside that cell.
  struct Cell {
    int i0 = 0;
    int j0 = 0;
    double fx = 0.0;
    double fy = 0.0;
  };
  Cell locate(Vec2 p) const;

  template <class NodeValue>
  double bilinear(Vec2 p, NodeValue&& value) const {
    const Cell c = locate(p);
    const double v00 = value(index(c.i0, c.j0));
    const double v10 = value(index(c.i0 + 1, c.j0));
    const double v01 = value(index(c.i0, c.j0 + 1));
    const double v11 = value(index(c.i0 + 1, c.j0 + 1));
    return (1.0 - c.fy) * ((1.0 - c.fx) * v00 + c.fx * v10) +
           c.fy * ((1.0 - c.fx) * v01 + c.fx * v11);
  }

  friend bool operator==(const Grid2D&, const Grid2D&) = default;

 private:
  int n_;
  double h_;
};

// Uniform time slices t_k = k dt, k = 0..steps, with deadline T = steps * dt.
class TimeGrid {
 public:
  TimeGrid(double dt, double deadline);

  double dt() const { return dt_; }
  int steps() const { return steps_; }
  int slice_count() const { return steps_ + 1; }
  double deadline() const { return steps_ * dt_; }
  double time(int k) const { return k * dt_; }

  friend bool operator==(const TimeGrid&, const TimeGrid&) = default;

 private:
  double dt_;
  int steps_;
};

}  // namespace seg
