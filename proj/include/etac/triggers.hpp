#pragma once

#include <optional>
#include <vector>

#include "etac/graph.hpp"

namespace etac {

/// Relative tolerance used to decide "the triggering function is zero".
/// Exact-equality events arise only at analytically computed crossing
/// times, which the engine schedules exactly; this absorbs rounding.
inline constexpr double kTriggerEqualityTol = 1e-12;

/// Per-agent trigger parameters. `make_trigger_params` is the validated
/// constructor; it enforces sigma_i in (0,1) and the rebroadcast-window
/// bound epsilon_i < sqrt(sigma_i / (4 d_i^out w_i^max |N_i^out|)) on
/// every graph the schedule can activate.
struct TriggerParams {
  Vector sigma;
  Vector epsilon;

  double sigma_max() const;
};

/// Largest admissible epsilon_i over the given graphs (infinity when the
/// agent has no out-neighbors in any of them).
double epsilon_upper_bound(int i, const std::vector<WeightedDigraph>& graphs, double sigma_i);

/// Validates sigma and epsilon against the graphs. When epsilon is not
/// given, defaults each epsilon_i to half its upper bound.
TriggerParams make_trigger_params(const std::vector<WeightedDigraph>& graphs,
                                  const Vector& sigma,
                                  const std::optional<Vector>& epsilon = std::nullopt);

/// phi_i = sum over out-neighbors of w_ij (xhat_i - xhat_j)^2.
double phi(int i, const Vector& xhat, const WeightedDigraph& g);

/// zhat_i = sum over out-neighbors of w_ij (xhat_j - xhat_i); equals the
/// control input u_i, which is constant between broadcasts.
double zhat(int i, const Vector& xhat, const WeightedDigraph& g);

/// sigma_i phi_i / (4 d_i^out); zero when the agent has no out-edges.
double trigger_threshold(int i, const Vector& xhat, const WeightedDigraph& g, double sigma_i);

/// Triggering function f_i(e_i) = e_i^2 - threshold_i.
double trigger_function(int i, double e_i, const Vector& xhat, const WeightedDigraph& g,
                        double sigma_i);

/// Broadcast rule: fire when f_i > 0, or when f_i = 0 (within the
/// equality tolerance) and phi_i != 0.
bool should_broadcast(double e_i, double phi_i, double threshold_i);

/// Convenience overload evaluating phi/threshold from the state.
bool should_broadcast(int i, double e_i, const Vector& xhat, const WeightedDigraph& g,
                      const TriggerParams& params);

/// Forced-rebroadcast window: an agent that receives information at time
/// t rebroadcasts iff t lies strictly inside (t_last, t_last + eps).
bool cooldown_rebroadcast(double t, double t_last, double eps);

/// Per-agent quantities the engine caches between events.
struct TriggerSnapshot {
  Vector phi;
  Vector threshold;
  Vector zhat;
};

TriggerSnapshot make_snapshot(const Vector& xhat, const WeightedDigraph& g,
                              const TriggerParams& params);

/// Time until e(t) = e0 - delta * z crosses the admissible boundary
/// e^2 = threshold, i.e. the smallest delta > 0 with
/// (e0 - delta z)^2 = threshold. Returns +infinity when z = 0 (the error
/// is frozen) and throws InconsistentStateError when e0 already violates
/// e0^2 <= threshold beyond tolerance.
double next_crossing(double e0, double z, double threshold);

/// Overload reading z and threshold for agent i from a snapshot.
double next_crossing(int i, double e0, const TriggerSnapshot& snap);

}  // namespace etac
