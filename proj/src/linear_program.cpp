#include "seg/linear_program.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace seg {
namespace {

constexpr double kEps = 1e-11;

struct Tableau {
  // rows 0..m-1 are constraints, row m is the objective (reduced costs); last column is the rhs.
  std::vector<std::vector<double>> t;
  std::vector<int> basis;
  int cols = 0;  // variable columns, rhs excluded

  double& rhs(int r) { return t[static_cast<std::size_t>(r)][static_cast<std::size_t>(cols)]; }

  void pivot(int row, int col) {
    auto& pr = t[static_cast<std::size_t>(row)];
    const double p = pr[static_cast<std::size_t>(col)];
    for (double& v : pr) v /= p;
    for (std::size_t r = 0; r < t.size(); ++r) {
      if (static_cast<int>(r) == row) continue;
      const double factor = t[r][static_cast<std::size_t>(col)];
      if (factor == 0.0) continue;
      for (std::size_t k = 0; k < pr.size(); ++k) t[r][k] -= factor * pr[k];
    }
    basis[static_cast<std::size_t>(row)] = col;
  }

  // Minimizes the objective row over columns [0, allowed). False when unbounded.
  bool run(int allowed) {
    const int m = static_cast<int>(basis.size());
    auto& obj = t[static_cast<std::size_t>(m)];
    for (;;) {
      int enter = -1;
      for (int c = 0; c < allowed; ++c) {
        if (obj[static_cast<std::size_t>(c)] < -kEps) {
          enter = c;
          break;
        }
      }
      if (enter < 0) return true;
      int leave = -1;
      double best_ratio = std::numeric_limits<double>::infinity();
      for (int r = 0; r < m; ++r) {
        const double a = t[static_cast<std::size_t>(r)][static_cast<std::size_t>(enter)];
        if (a > kEps) {
          const double ratio = rhs(r) / a;
          if (ratio < best_ratio - kEps ||
              (leave >= 0 && std::abs(ratio - best_ratio) <= kEps && basis[static_cast<std::size_t>(r)] < basis[static_cast<std::size_t>(leave)])) {
            best_ratio = ratio;
            leave = r;
          }
        }
      }
      if (leave < 0) return false;
      pivot(leave, enter);
    }
  }
};

}  // namespace

std::optional<LpSolution> solve_lp(const LinearProgram& lp) {
  const int n = static_cast<int>(lp.c.size());
  const int m_ub = static_cast<int>(lp.a_ub.size());
  const int m_eq = static_cast<int>(lp.a_eq.size());
  const int m = m_ub + m_eq;
  if (static_cast<int>(lp.b_ub.size()) != m_ub || static_cast<int>(lp.b_eq.size()) != m_eq) {
    throw std::invalid_argument("solve_lp: rhs size mismatch");
  }

  // Columns: x (n), slacks (m_ub), artificials (m).
  Tableau tab;
  tab.cols = n + m_ub + m;
  tab.t.assign(static_cast<std::size_t>(m + 1), std::vector<double>(static_cast<std::size_t>(tab.cols + 1), 0.0));
  tab.basis.assign(static_cast<std::size_t>(m), 0);
  for (int r = 0; r < m; ++r) {
    const bool ub = r < m_ub;
    const auto& row = ub ? lp.a_ub[static_cast<std::size_t>(r)] : lp.a_eq[static_cast<std::size_t>(r - m_ub)];
    if (static_cast<int>(row.size()) != n) throw std::invalid_argument("solve_lp: row size mismatch");
    double b = ub ? lp.b_ub[static_cast<std::size_t>(r)] : lp.b_eq[static_cast<std::size_t>(r - m_ub)];
    const double sign = b < 0.0 ? -1.0 : 1.0;
    auto& tr = tab.t[static_cast<std::size_t>(r)];
    for (int c = 0; c < n; ++c) tr[static_cast<std::size_t>(c)] = sign * row[static_cast<std::size_t>(c)];
    if (ub) tr[static_cast<std::size_t>(n + r)] = sign;
    tr[static_cast<std::size_t>(n + m_ub + r)] = 1.0;
    tab.rhs(r) = sign * b;
    tab.basis[static_cast<std::size_t>(r)] = n + m_ub + r;
  }

  // Phase 1: minimize the sum of artificials.
  auto& obj = tab.t[static_cast<std::size_t>(m)];
  for (int r = 0; r < m; ++r) {
    for (int c = 0; c <= tab.cols; ++c) {
      if (c >= n + m_ub && c < tab.cols) continue;
      obj[static_cast<std::size_t>(c)] -= tab.t[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
    }
  }
  tab.run(tab.cols);
  if (-obj[static_cast<std::size_t>(tab.cols)] > 1e-9) return std::nullopt;

  // Drive remaining artificials out of the basis where possible.
  for (int r = 0; r < m; ++r) {
    if (tab.basis[static_cast<std::size_t>(r)] < n + m_ub) continue;
    for (int c = 0; c < n + m_ub; ++c) {
      if (std::abs(tab.t[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)]) > kEps) {
        tab.pivot(r, c);
        break;
      }
    }
  }

  // Phase 2 objective in terms of the current basis.
  std::fill(obj.begin(), obj.end(), 0.0);
  for (int c = 0; c < n; ++c) obj[static_cast<std::size_t>(c)] = lp.c[static_cast<std::size_t>(c)];
  for (int r = 0; r < m; ++r) {
    const int b = tab.basis[static_cast<std::size_t>(r)];
    const double cb = b < n ? lp.c[static_cast<std::size_t>(b)] : 0.0;
    if (cb == 0.0) continue;
    for (int c = 0; c <= tab.cols; ++c) obj[static_cast<std::size_t>(c)] -= cb * tab.t[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
  }
  if (!tab.run(n + m_ub)) return std::nullopt;

  LpSolution sol;
  sol.x.assign(static_cast<std::size_t>(n), 0.0);
  for (int r = 0; r < m; ++r) {
    const int b = tab.basis[static_cast<std::size_t>(r)];
    if (b < n) sol.x[static_cast<std::size_t>(b)] = tab.rhs(r);
  }
  sol.objective = 0.0;
  for (int c = 0; c < n; ++c) sol.objective += lp.c[static_cast<std::size_t>(c)] * sol.x[static_cast<std::size_t>(c)];
  return sol;
}

}  // namespace seg
