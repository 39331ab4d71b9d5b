#pragma once

#include <utility>
#include <vector>

#include "etac/matrix.hpp"

namespace etac {

/// Directed edge (tail, head, weight): head is an out-neighbor of tail.
struct Edge {
  int tail = 0;
  int head = 0;
  double weight = 0.0;

  bool operator==(const Edge&) const = default;
};

/// Weighted digraph over vertices 0..n-1. Construction validates the
/// structure: positive weights, no self-loops, no duplicate edges
/// (duplicates are rejected, not merged). Adjacency is kept in sorted
/// order so that every per-vertex sum is evaluated in a fixed order.
class WeightedDigraph {
 public:
  WeightedDigraph(int n, std::vector<Edge> edges);

  int size() const { return n_; }
  const std::vector<Edge>& edges() const { return edges_; }

  /// Out-edges (head, weight) of vertex i, sorted by head.
  const std::vector<std::pair<int, double>>& out_edges(int i) const { return out_[i]; }
  /// In-edges (tail, weight) of vertex i, sorted by tail.
  const std::vector<std::pair<int, double>>& in_edges(int i) const { return in_[i]; }

  std::vector<int> out_neighbors(int i) const;
  std::vector<int> in_neighbors(int i) const;

  bool operator==(const WeightedDigraph& other) const {
    return n_ == other.n_ && edges_ == other.edges_;
  }

 private:
  int n_ = 0;
  std::vector<Edge> edges_;  // sorted by (tail, head)
  std::vector<std::vector<std::pair<int, double>>> out_;
  std::vector<std::vector<std::pair<int, double>>> in_;
};

/// Weighted degree data and the maxima that enter trigger bounds.
struct DegreeData {
  Vector d_out;        // per-vertex weighted out-degree
  Vector d_in;         // per-vertex weighted in-degree
  double d_min_out;    // min_i d_out[i]
  double d_max_out;    // max_i d_out[i]
  Vector w_i_max;      // per-vertex max outgoing weight (0 when no out-edges)
  double w_max;        // max_i w_i_max[i]
  int n_out_max;       // max out-neighbor count
};

DegreeData degree_data(const WeightedDigraph& g);

/// L = D_out - W. Row sums are zero by construction.
Matrix laplacian(const WeightedDigraph& g);

/// True iff max_i |d_out[i] - d_in[i]| <= tol.
bool is_weight_balanced(const WeightedDigraph& g, double tol = 1e-9);

/// True iff every vertex reaches every other along directed edges.
bool is_strongly_connected(const WeightedDigraph& g);

struct SpectralData {
  double lambda2 = 0.0;  // second-smallest eigenvalue of Sym(L)
  double lambdaN = 0.0;  // largest eigenvalue of Sym(L)
};

/// Eigenvalue extremes of Sym(L) = (L + L^T)/2 for a weight-balanced,
/// strongly connected digraph. The result is validated against the
/// quadratic-form bounds on a sample of deterministic random vectors;
/// failures of the eigensolver or the validation throw.
SpectralData spectral(const WeightedDigraph& g);

}  // namespace etac
