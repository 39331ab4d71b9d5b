#include "etac/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "etac/errors.hpp"

namespace etac {

double lyapunov(const Vector& x) {
  const std::size_t n = x.size();
  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= static_cast<double>(n);
  double acc = 0.0;
  for (double v : x) acc += (v - mean) * (v - mean);
  return 0.5 * acc;
}

RateCertificate rate_certificate(const WeightedDigraph& g, const TriggerParams& params) {
  const SpectralData spec = spectral(g);
  if (spec.lambda2 <= 1e-9) {
    std::ostringstream msg;
    msg << "rate certificate requires lambda2 > 0 (got " << spec.lambda2
        << "); graph is not strongly connected";
    throw ValidationError(msg.str());
  }
  RateCertificate cert;
  cert.lambda2 = spec.lambda2;
  cert.lambdaN = spec.lambdaN;
  cert.d_min_out = degree_data(g).d_min_out;
  cert.sigma_max = params.sigma_max();
  const double s = std::sqrt(cert.lambdaN * cert.sigma_max / (2.0 * cert.d_min_out));
  cert.A = (1.0 + s) * (1.0 + s) / (2.0 * cert.lambda2);
  cert.rate = (cert.sigma_max - 1.0) / (2.0 * cert.A);
  return cert;
}

BoundReport verify_exponential_bound(const Trajectory& traj, const RateCertificate& cert) {
  BoundReport report;
  if (traj.samples.empty()) return report;
  const double v0 = traj.samples.front().V;
  for (const TrajectorySample& s : traj.samples) {
    const double bound = v0 * std::exp(cert.rate * s.t);
    if (s.V > bound * (1.0 + 1e-8) + 1e-12) {
      if (report.holds) report.first_violation_t = s.t;
      report.holds = false;
    }
    if (bound > 0.0) report.max_ratio = std::max(report.max_ratio, s.V / bound);
    ++report.samples_checked;
  }
  return report;
}

RunMetrics event_stats(const EventLog& log, int n) {
  RunMetrics m;
  m.per_agent.assign(n, 0);
  m.min_interevent.assign(n, std::numeric_limits<double>::infinity());
  std::vector<double> last(n, std::numeric_limits<double>::quiet_NaN());
  for (const SimEvent& ev : log) {
    if (!is_broadcast(ev.kind)) continue;
    ++m.event_count_total;
    ++m.per_agent[ev.agent];
    const double prev = last[ev.agent];
    if (!std::isnan(prev) && ev.t > prev)
      m.min_interevent[ev.agent] = std::min(m.min_interevent[ev.agent], ev.t - prev);
    last[ev.agent] = ev.t;
  }
  return m;
}

RunMetrics compute_metrics(const Trajectory& traj, int n) {
  RunMetrics m = event_stats(traj.events, n);
  m.v_trace.reserve(traj.samples.size());
  for (const TrajectorySample& s : traj.samples) m.v_trace.emplace_back(s.t, s.V);
  if (!traj.samples.empty()) {
    const Vector& x0 = traj.samples.front().x;
    double mean0 = 0.0;
    for (double v : x0) mean0 += v;
    mean0 /= static_cast<double>(x0.size());
    const Vector& xT = traj.samples.back().x;
    double worst = 0.0;
    for (double v : xT) worst = std::max(worst, std::abs(v - mean0));
    m.final_disagreement = worst;
  }
  return m;
}

double empirical_rate(const Trajectory& traj) {
  if (traj.samples.empty()) return std::numeric_limits<double>::quiet_NaN();
  const double v0 = traj.samples.front().V;
  const double floor = 1e-10 * v0;
  // Least squares on log V to stay clear of the numerical floor.
  double st = 0.0, sy = 0.0, stt = 0.0, sty = 0.0;
  long count = 0;
  for (const TrajectorySample& s : traj.samples) {
    if (!(s.V > floor) || !(s.V > 0.0)) continue;
    const double y = std::log(s.V);
    st += s.t;
    sy += y;
    stt += s.t * s.t;
    sty += s.t * y;
    ++count;
  }
  if (count < 2) return std::numeric_limits<double>::quiet_NaN();
  const double denom = count * stt - st * st;
  if (denom == 0.0) return std::numeric_limits<double>::quiet_NaN();
  return (count * sty - st * sy) / denom;
}

}  // namespace etac
