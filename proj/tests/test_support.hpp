#pragma once

// Shared fixtures and independent oracles for the test suites.

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "etac/graph.hpp"
#include "etac/matrix.hpp"

namespace etac::test {

inline std::string scenario_path(const std::string& name) {
  return std::string(ETAC_SCENARIO_DIR) + "/" + name;
}

// Five agents, weight-balanced digraph (the bundled fig2 topology).
inline WeightedDigraph fig2_graph() {
  return WeightedDigraph(5, {{0, 1, 1.0},
                             {1, 2, 1.0},
                             {1, 3, 0.5},
                             {2, 3, 1.0},
                             {3, 4, 1.5},
                             {4, 0, 1.0},
                             {4, 1, 0.5}});
}

// Five agents, undirected tree as a symmetric digraph (fig1 topology).
inline WeightedDigraph fig1_graph() {
  std::vector<Edge> edges;
  for (auto [a, b] : {std::pair{0, 1}, {0, 2}, {1, 3}, {3, 4}}) {
    edges.push_back({a, b, 1.0});
    edges.push_back({b, a, 1.0});
  }
  return WeightedDigraph(5, edges);
}

inline Vector fig_x0() { return {-1.0, 0.0, 2.0, 2.0, 1.0}; }

// ---- Independent symmetric-eigenvalue oracle ----------------------------
// Counts eigenvalues below x via the pivot signs of an LDL^T elimination
// of A - xI (Sylvester's law of inertia), then bisects. Shares nothing
// with the Jacobi path under test.

inline int eig_count_below(const Matrix& a, double x) {
  const int n = a.size();
  Matrix b(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) b(i, j) = a(i, j) - (i == j ? x : 0.0);
  int negatives = 0;
  for (int k = 0; k < n; ++k) {
    double pivot = b(k, k);
    if (pivot == 0.0) pivot = 1e-300;
    if (pivot < 0.0) ++negatives;
    for (int i = k + 1; i < n; ++i) {
      const double f = b(i, k) / pivot;
      for (int j = k; j < n; ++j) b(i, j) -= f * b(k, j);
    }
  }
  return negatives;
}

inline double oracle_eigenvalue(const Matrix& a, int k) {
  const int n = a.size();
  double lo = a(0, 0), hi = a(0, 0);
  for (int i = 0; i < n; ++i) {
    double radius = 0.0;
    for (int j = 0; j < n; ++j)
      if (j != i) radius += std::abs(a(i, j));
    lo = std::min(lo, a(i, i) - radius);
    hi = std::max(hi, a(i, i) + radius);
  }
  lo -= 1.0;
  hi += 1.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (eig_count_below(a, mid) <= k) lo = mid;
    else hi = mid;
  }
  return 0.5 * (lo + hi);
}

// ---- Random fixtures -----------------------------------------------------
// A union of directed cycles is weight-balanced (every cycle adds the
// same weight to each member's in- and out-degree), and including one
// Hamiltonian cycle keeps it strongly connected.

inline WeightedDigraph random_balanced_graph(std::mt19937_64& rng, int n) {
  std::map<std::pair<int, int>, double> weights;
  std::uniform_real_distribution<double> weight_dist(0.25, 2.0);
  std::uniform_int_distribution<int> extra_dist(0, 3);

  auto add_cycle = [&](const std::vector<int>& cycle) {
    const double w = weight_dist(rng);
    for (std::size_t k = 0; k < cycle.size(); ++k)
      weights[{cycle[k], cycle[(k + 1) % cycle.size()]}] += w;
  };

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  add_cycle(order);

  const int extras = extra_dist(rng);
  for (int e = 0; e < extras; ++e) {
    std::shuffle(order.begin(), order.end(), rng);
    const int len = std::uniform_int_distribution<int>(2, n)(rng);
    add_cycle({order.begin(), order.begin() + len});
  }

  std::vector<Edge> edges;
  for (const auto& [key, w] : weights)
    if (key.first != key.second) edges.push_back({key.first, key.second, w});
  return WeightedDigraph(n, edges);
}

inline Vector random_vector(std::mt19937_64& rng, int n, double lo = -2.0, double hi = 2.0) {
  std::uniform_real_distribution<double> dist(lo, hi);
  Vector x(n);
  for (double& v : x) v = dist(rng);
  return x;
}

}  // namespace etac::test
