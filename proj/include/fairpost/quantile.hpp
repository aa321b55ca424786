#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <vector>

#include "fairpost/errors.hpp"

namespace fairpost {

// Empirical rank/quantile conventions shared across the 1-D transport code:
//  - sample i of n sits at rank (i + 0.5) / n (midpoint convention)
//  - the quantile function interpolates linearly between adjacent knots and
//    clamps to the extreme samples outside [0.5/n, 1 - 0.5/n]

inline Eigen::VectorXd midpoint_ranks(Eigen::Index n) {
  if (n < 1) throw ValidationError("rank grid needs at least one sample");
  Eigen::VectorXd u(n);
  for (Eigen::Index i = 0; i < n; ++i)
    u(i) = (static_cast<double>(i) + 0.5) / static_cast<double>(n);
  return u;
}

// Piecewise-linear empirical quantile of an ascending sample vector.
inline double quantile_eval(const Eigen::VectorXd& sorted, double u) {
  const Eigen::Index n = sorted.size();
  if (n == 0) throw ValidationError("empty sample vector");
  if (n == 1) return sorted(0);
  const double nn = static_cast<double>(n);
  if (u <= 0.5 / nn) return sorted(0);
  if (u >= (nn - 0.5) / nn) return sorted(n - 1);
  // u sits between ranks (i+0.5)/n and (i+1.5)/n for some 0 <= i < n-1
  const double pos = u * nn - 0.5;
  const auto i = static_cast<Eigen::Index>(pos);
  const Eigen::Index lo = std::min(i, n - 2);
  const double frac = pos - static_cast<double>(lo);
  return sorted(lo) + frac * (sorted(lo + 1) - sorted(lo));
}

// Sorted union of the midpoint rank grids of two sample sizes, duplicates
// removed. Used to align groups of unequal size on a common grid.
inline std::vector<double> union_rank_grid(Eigen::Index n1, Eigen::Index n2) {
  std::vector<double> grid;
  grid.reserve(static_cast<std::size_t>(n1 + n2));
  for (Eigen::Index i = 0; i < n1; ++i)
    grid.push_back((static_cast<double>(i) + 0.5) / static_cast<double>(n1));
  for (Eigen::Index i = 0; i < n2; ++i)
    grid.push_back((static_cast<double>(i) + 0.5) / static_cast<double>(n2));
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  return grid;
}

// Quadrature weights for nodes in (0,1): each node owns the cell between the
// midpoints to its neighbours, with the first cell starting at 0 and the last
// ending at 1. Weights are positive and sum to 1; for the midpoint grid of a
// single size n they are all 1/n.
inline std::vector<double> cell_weights(const std::vector<double>& nodes) {
  if (nodes.empty()) throw ValidationError("empty quadrature grid");
  const std::size_t m = nodes.size();
  std::vector<double> w(m);
  for (std::size_t i = 0; i < m; ++i) {
    const double lo = (i == 0) ? 0.0 : 0.5 * (nodes[i - 1] + nodes[i]);
    const double hi = (i + 1 == m) ? 1.0 : 0.5 * (nodes[i] + nodes[i + 1]);
    w[i] = hi - lo;
  }
  return w;
}

}  // namespace fairpost
