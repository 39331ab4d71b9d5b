#pragma once

#include <utility>
#include <vector>

#include "etac/engine.hpp"
#include "etac/graph.hpp"
#include "etac/triggers.hpp"

namespace etac {

/// Disagreement V(x) = 1/2 ||x - mean(x) 1||^2.
double lyapunov(const Vector& x);

/// Guaranteed exponential decay of V under the broadcast law:
/// V(x(t)) <= V(x(0)) exp(rate t) with rate = (sigma_max - 1) / (2 A).
struct RateCertificate {
  double A = 0.0;
  double rate = 0.0;
  double lambda2 = 0.0;
  double lambdaN = 0.0;
  double d_min_out = 0.0;
  double sigma_max = 0.0;
};

/// A = (1 / (2 lambda2)) (1 + sqrt(lambdaN sigma_max / (2 d_min_out)))^2.
/// Requires a weight-balanced, strongly connected graph (lambda2 > 0).
RateCertificate rate_certificate(const WeightedDigraph& g, const TriggerParams& params);

struct BoundReport {
  bool holds = true;
  double max_ratio = 0.0;          // max over samples of V(t) / (V(0) exp(rate t))
  double first_violation_t = 0.0;  // meaningful only when !holds
  std::size_t samples_checked = 0;
};

/// Checks V(t) <= V(0) exp(rate t) at every trajectory sample, with
/// relative tolerance 1e-8 plus absolute 1e-12 absorbing eigenvalue
/// error propagated into A.
BoundReport verify_exponential_bound(const Trajectory& traj, const RateCertificate& cert);

struct RunMetrics {
  long event_count_total = 0;
  std::vector<long> per_agent;
  std::vector<double> min_interevent;  // min positive gap between an agent's broadcast instants
  double final_disagreement = 0.0;     // max_i |x_i(T) - mean(x(0))|
  std::vector<std::pair<double, double>> v_trace;  // (t, V) samples
};

/// Event counts and inter-event gaps from a log alone.
RunMetrics event_stats(const EventLog& log, int n);

/// event_stats plus the trajectory-derived fields.
RunMetrics compute_metrics(const Trajectory& traj, int n);

/// Least-squares slope of log V(t) over the samples where
/// V > 1e-10 V(0); NaN when fewer than two such samples exist.
double empirical_rate(const Trajectory& traj);

}  // namespace etac
