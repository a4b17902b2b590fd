// Independent reference computations used by the unit and acceptance tests.
// Nothing here calls into the code paths it is used to check.
#ifndef MADM_TESTS_ORACLES_HPP_
#define MADM_TESTS_ORACLES_HPP_

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <utility>
#include <vector>

#include "madm/graph.hpp"
#include "madm/types.hpp"

namespace madm::oracle {

// Golden-section search for a minimizer of a unimodal f on [lo, hi].
inline double golden_section(const std::function<double(double)>& f, double lo, double hi,
                             int iterations = 200) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo;
  double b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c);
  double fd = f(d);
  for (int it = 0; it < iterations && b - a > 1e-15 * (1.0 + std::abs(a) + std::abs(b)); ++it) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  return fc < fd ? c : d;
}

// Global minimum value of a 1-D function on [lo, hi]: dense grid, then
// golden-section refinement around the best few grid-local minima.
inline double grid_golden_min(const std::function<double(double)>& f, double lo, double hi,
                              int grid = 4001, int refine = 3) {
  std::vector<double> t(grid);
  std::vector<double> v(grid);
  for (int k = 0; k < grid; ++k) {
    t[k] = lo + (hi - lo) * k / (grid - 1);
    v[k] = f(t[k]);
  }
  std::vector<int> local;
  for (int k = 0; k < grid; ++k) {
    const bool left = k == 0 || v[k] <= v[k - 1];
    const bool right = k == grid - 1 || v[k] <= v[k + 1];
    if (left && right) local.push_back(k);
  }
  std::sort(local.begin(), local.end(), [&](int x, int y) { return v[x] < v[y]; });
  double best = *std::min_element(v.begin(), v.end());
  for (int r = 0; r < std::min<int>(refine, static_cast<int>(local.size())); ++r) {
    const int k = local[r];
    const double a = t[std::max(0, k - 1)];
    const double b = t[std::min(grid - 1, k + 1)];
    best = std::min(best, f(golden_section(f, a, b)));
  }
  return best;
}

// Minimum over t of |t^2 - b^2| + (t - c)^2 / (2 gamma s), by brute force.
inline double phase_prox_phi_oracle(double c, double b, double gamma, double s) {
  auto phi = [&](double t) {
    const double d = t - c;
    return std::abs(t * t - b * b) + d * d / (2.0 * gamma * s);
  };
  // Any minimizer lies within r of c, since phi(t) >= (t-c)^2/(2 gamma s) and phi(c) = |c^2-b^2|.
  const double r = std::sqrt(2.0 * gamma * s * std::abs(c * c - b * b)) + 1e-9;
  return grid_golden_min(phi, c - r, c + r);
}

// Central finite-difference gradient.
inline Vector fd_gradient(const std::function<double(const Vector&)>& f, const Vector& x,
                          double h) {
  Vector g(x.size());
  for (Eigen::Index k = 0; k < x.size(); ++k) {
    Vector xp = x;
    Vector xm = x;
    xp[k] += h;
    xm[k] -= h;
    g[k] = (f(xp) - f(xm)) / (2.0 * h);
  }
  return g;
}

// Union-find connectivity straight from the edge list.
inline bool union_find_connected(const CommGraph& g) {
  std::vector<int> parent(g.num_agents());
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int u) { return parent[u] == u ? u : parent[u] = find(parent[u]); };
  int components = g.num_agents();
  for (const Edge& e : g.edges()) {
    int a = find(e.i);
    int b = find(e.j);
    if (a != b) {
      parent[a] = b;
      --components;
    }
  }
  return components == 1;
}

// Breadth-first reachability over the raw edge list (no adjacency structure).
inline bool edge_list_bfs_connected(const CommGraph& g) {
  std::vector<char> seen(g.num_agents(), 0);
  seen[0] = 1;
  bool grew = true;
  while (grew) {
    grew = false;
    for (const Edge& e : g.edges()) {
      if (seen[e.i] != seen[e.j]) {
        seen[e.i] = seen[e.j] = 1;
        grew = true;
      }
    }
  }
  return std::all_of(seen.begin(), seen.end(), [](char c) { return c != 0; });
}

}  // namespace madm::oracle

#endif  // MADM_TESTS_ORACLES_HPP_
