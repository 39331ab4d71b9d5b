#include "etac/triggers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "etac/errors.hpp"

namespace etac {

double TriggerParams::sigma_max() const { return *std::max_element(sigma.begin(), sigma.end()); }

double epsilon_upper_bound(int i, const std::vector<WeightedDigraph>& graphs, double sigma_i) {
  double bound = std::numeric_limits<double>::infinity();
  for (const WeightedDigraph& g : graphs) {
    const auto& out = g.out_edges(i);
    if (out.empty()) continue;
    double d_out = 0.0;
    double w_max = 0.0;
    for (const auto& [j, w] : out) {
      d_out += w;
      w_max = std::max(w_max, w);
    }
    bound = std::min(bound, std::sqrt(sigma_i / (4.0 * d_out * w_max * out.size())));
  }
  return bound;
}

TriggerParams make_trigger_params(const std::vector<WeightedDigraph>& graphs, const Vector& sigma,
                                  const std::optional<Vector>& epsilon) {
  if (graphs.empty()) throw ValidationError("trigger parameters need at least one graph");
  const int n = graphs.front().size();
  if (static_cast<int>(sigma.size()) != n)
    throw ValidationError("sigma must have one entry per agent");
  if (epsilon && static_cast<int>(epsilon->size()) != n)
    throw ValidationError("epsilon must have one entry per agent");

  TriggerParams params;
  params.sigma = sigma;
  params.epsilon.assign(n, 0.0);
  for (int i = 0; i < n; ++i) {
    if (!(sigma[i] > 0.0 && sigma[i] < 1.0)) {
      std::ostringstream msg;
      msg << "sigma for agent " << i + 1 << " must lie in (0,1), got " << sigma[i];
      throw ValidationError(msg.str());
    }
    const double bound = epsilon_upper_bound(i, graphs, sigma[i]);
    if (epsilon) {
      const double eps = (*epsilon)[i];
      if (!(eps > 0.0)) {
        std::ostringstream msg;
        msg << "epsilon for agent " << i + 1 << " must be positive, got " << eps;
        throw ValidationError(msg.str());
      }
      if (!(eps < bound)) {
        std::ostringstream msg;
        msg << "epsilon for agent " << i + 1 << " must be below sqrt(sigma_i / (4 d_i^out"
            << " w_i^max |N_i^out|)) = " << bound << ", got " << eps;
        throw ValidationError(msg.str());
      }
      params.epsilon[i] = eps;
    } else {
      // Midpoint of the feasible interval; any positive value below the
      // bound is admissible.
      params.epsilon[i] = std::isinf(bound) ? 1.0 : 0.5 * bound;
    }
  }
  return params;
}

double phi(int i, const Vector& xhat, const WeightedDigraph& g) {
  double acc = 0.0;
  for (const auto& [j, w] : g.out_edges(i)) {
    const double diff = xhat[i] - xhat[j];
    acc += w * diff * diff;
  }
  return acc;
}

double zhat(int i, const Vector& xhat, const WeightedDigraph& g) {
  double acc = 0.0;
  for (const auto& [j, w] : g.out_edges(i)) acc += w * (xhat[j] - xhat[i]);
  return acc;
}

double trigger_threshold(int i, const Vector& xhat, const WeightedDigraph& g, double sigma_i) {
  const auto& out = g.out_edges(i);
  if (out.empty()) return 0.0;
  double d_out = 0.0;
  for (const auto& [j, w] : out) d_out += w;
  return sigma_i * phi(i, xhat, g) / (4.0 * d_out);
}

double trigger_function(int i, double e_i, const Vector& xhat, const WeightedDigraph& g,
                        double sigma_i) {
  return e_i * e_i - trigger_threshold(i, xhat, g, sigma_i);
}

bool should_broadcast(double e_i, double phi_i, double threshold_i) {
  const double diff = e_i * e_i - threshold_i;
  const double tol = kTriggerEqualityTol * std::max(1.0, threshold_i);
  if (diff > tol) return true;
  return std::abs(diff) <= tol && phi_i > 0.0;
}

bool should_broadcast(int i, double e_i, const Vector& xhat, const WeightedDigraph& g,
                      const TriggerParams& params) {
  return should_broadcast(e_i, phi(i, xhat, g),
                          trigger_threshold(i, xhat, g, params.sigma[i]));
}

bool cooldown_rebroadcast(double t, double t_last, double eps) {
  return t > t_last && t < t_last + eps;
}

TriggerSnapshot make_snapshot(const Vector& xhat, const WeightedDigraph& g,
                              const TriggerParams& params) {
  const int n = g.size();
  TriggerSnapshot snap;
  snap.phi.resize(n);
  snap.threshold.resize(n);
  snap.zhat.resize(n);
  for (int i = 0; i < n; ++i) {
    snap.phi[i] = phi(i, xhat, g);
    snap.threshold[i] = trigger_threshold(i, xhat, g, params.sigma[i]);
    snap.zhat[i] = zhat(i, xhat, g);
  }
  return snap;
}

double next_crossing(double e0, double z, double threshold) {
  const double tol = kTriggerEqualityTol * std::max(1.0, threshold);
  if (e0 * e0 > threshold + tol) {
    std::ostringstream msg;
    msg << "next_crossing called with e0^2 = " << e0 * e0 << " above threshold " << threshold
        << "; the trigger should already have fired";
    throw InconsistentStateError(msg.str());
  }
  if (z == 0.0) return std::numeric_limits<double>::infinity();

  // e(delta) = e0 - delta*z moves monotonically and exits through the
  // boundary -sign(z)*sqrt(threshold). A grazing start at the opposite
  // boundary yields the full transit time, never the degenerate root 0.
  const double root = std::sqrt(std::max(threshold, 0.0));
  const double exit_boundary = z > 0.0 ? -root : root;
  const double delta = (e0 - exit_boundary) / z;
  return std::max(delta, 0.0);
}

double next_crossing(int i, double e0, const TriggerSnapshot& snap) {
  return next_crossing(e0, snap.zhat[i], snap.threshold[i]);
}

}  // namespace etac
