#include "etac/graph.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "etac/errors.hpp"

namespace etac {

WeightedDigraph::WeightedDigraph(int n, std::vector<Edge> edges) : n_(n), edges_(std::move(edges)) {
  if (n_ <= 0) throw ValidationError("graph must have at least one vertex");
  std::sort(edges_.begin(), edges_.end(), [](const Edge& a, const Edge& b) {
    return std::pair(a.tail, a.head) < std::pair(b.tail, b.head);
  });
  out_.assign(n_, {});
  in_.assign(n_, {});
  for (std::size_t k = 0; k < edges_.size(); ++k) {
    const Edge& e = edges_[k];
    if (e.tail < 0 || e.tail >= n_ || e.head < 0 || e.head >= n_) {
      std::ostringstream msg;
      msg << "edge (" << e.tail + 1 << "," << e.head + 1 << ") out of range for " << n_
          << " vertices";
      throw ValidationError(msg.str());
    }
    if (e.tail == e.head) {
      std::ostringstream msg;
      msg << "self-loop at vertex " << e.tail + 1;
      throw ValidationError(msg.str());
    }
    if (!(e.weight > 0.0)) {
      std::ostringstream msg;
      msg << "edge (" << e.tail + 1 << "," << e.head + 1 << ") has non-positive weight "
          << e.weight;
      throw ValidationError(msg.str());
    }
    if (k > 0 && edges_[k - 1].tail == e.tail && edges_[k - 1].head == e.head) {
      std::ostringstream msg;
      msg << "duplicate edge (" << e.tail + 1 << "," << e.head + 1 << ")";
      throw ValidationError(msg.str());
    }
    out_[e.tail].emplace_back(e.head, e.weight);
    in_[e.head].emplace_back(e.tail, e.weight);
  }
  for (auto& v : in_) std::sort(v.begin(), v.end());
}

std::vector<int> WeightedDigraph::out_neighbors(int i) const {
  std::vector<int> ids;
  ids.reserve(out_[i].size());
  for (const auto& [j, w] : out_[i]) ids.push_back(j);
  return ids;
}

std::vector<int> WeightedDigraph::in_neighbors(int i) const {
  std::vector<int> ids;
  ids.reserve(in_[i].size());
  for (const auto& [j, w] : in_[i]) ids.push_back(j);
  return ids;
}

DegreeData degree_data(const WeightedDigraph& g) {
  const int n = g.size();
  DegreeData d;
  d.d_out.assign(n, 0.0);
  d.d_in.assign(n, 0.0);
  d.w_i_max.assign(n, 0.0);
  d.n_out_max = 0;
  for (int i = 0; i < n; ++i) {
    for (const auto& [j, w] : g.out_edges(i)) {
      d.d_out[i] += w;
      d.w_i_max[i] = std::max(d.w_i_max[i], w);
    }
    for (const auto& [j, w] : g.in_edges(i)) d.d_in[i] += w;
    d.n_out_max = std::max(d.n_out_max, static_cast<int>(g.out_edges(i).size()));
  }
  d.d_min_out = *std::min_element(d.d_out.begin(), d.d_out.end());
  d.d_max_out = *std::max_element(d.d_out.begin(), d.d_out.end());
  d.w_max = *std::max_element(d.w_i_max.begin(), d.w_i_max.end());
  return d;
}

Matrix laplacian(const WeightedDigraph& g) {
  const int n = g.size();
  Matrix l(n);
  for (int i = 0; i < n; ++i) {
    double row_sum = 0.0;
    for (const auto& [j, w] : g.out_edges(i)) {
      l(i, j) = -w;
      row_sum += w;
    }
    l(i, i) = row_sum;
  }
  return l;
}

bool is_weight_balanced(const WeightedDigraph& g, double tol) {
  const DegreeData d = degree_data(g);
  for (int i = 0; i < g.size(); ++i)
    if (std::abs(d.d_out[i] - d.d_in[i]) > tol) return false;
  return true;
}

namespace {

// Vertices reachable from `start`, following out-edges (forward) or
// in-edges (reverse).
int reachable_count(const WeightedDigraph& g, int start, bool reverse) {
  std::vector<char> seen(g.size(), 0);
  std::vector<int> stack{start};
  seen[start] = 1;
  int count = 1;
  while (!stack.empty()) {
    const int v = stack.back();
    stack.pop_back();
    const auto& adj = reverse ? g.in_edges(v) : g.out_edges(v);
    for (const auto& [u, w] : adj) {
      if (!seen[u]) {
        seen[u] = 1;
        ++count;
        stack.push_back(u);
      }
    }
  }
  return count;
}

}  // namespace

bool is_strongly_connected(const WeightedDigraph& g) {
  // Strong connectivity <=> vertex 0 reaches everyone and everyone reaches it.
  return reachable_count(g, 0, false) == g.size() && reachable_count(g, 0, true) == g.size();
}

SpectralData spectral(const WeightedDigraph& g) {
  const Matrix l = laplacian(g);
  const Matrix s = symmetric_part(l);
  const JacobiResult eig = jacobi_eigenvalues(s);
  const int n = g.size();
  SpectralData out;
  out.lambda2 = n > 1 ? eig.eigenvalues[1] : 0.0;
  out.lambdaN = eig.eigenvalues[n - 1];

  // Sanity-check the computed extremes against the quadratic-form bounds
  // they are used for downstream.
  std::mt19937_64 rng(0x5eed5eedULL);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  const double tol = 1e-9;
  for (int trial = 0; trial < 64; ++trial) {
    Vector x(n);
    for (double& v : x) v = dist(rng);
    double mean = 0.0;
    for (double v : x) mean += v;
    mean /= n;
    Vector centered(n);
    for (int i = 0; i < n; ++i) centered[i] = x[i] - mean;
    const double xlx = quad_form(l, x);
    if (xlx < out.lambda2 * dot(centered, centered) - tol)
      throw EigenConvergenceError("spectral validation failed: lambda2 bound violated");
    const Vector sx = matvec(s, x);
    const double xssx = dot(sx, sx);
    if (out.lambda2 * xlx > xssx + tol || xssx > out.lambdaN * xlx + tol)
      throw EigenConvergenceError("spectral validation failed: Sym(L)^2 bound violated");
  }
  return out;
}

}  // namespace etac
