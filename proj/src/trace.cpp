#include "etac/trace.hpp"

#include <cmath>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "etac/format.hpp"

namespace etac {

void write_trace_csv(std::ostream& out, const Trajectory& traj, int n) {
  out << "t,kind,agent";
  for (int i = 1; i <= n; ++i) out << ",x_" << i;
  out << ",V,N_E\n";

  long cumulative = 0;
  std::size_t ev = 0;
  auto emit_state = [&](const TrajectorySample& s) {
    for (double v : s.x) out << "," << format_double(v);
    out << "," << format_double(s.V) << "," << cumulative << "\n";
  };
  for (const TrajectorySample& s : traj.samples) {
    // Event rows precede the sample row of their instant; the state
    // columns repeat that instant's sample (x is continuous across
    // broadcasts).
    while (ev < traj.events.size() && traj.events[ev].t <= s.t) {
      const SimEvent& e = traj.events[ev];
      if (is_broadcast(e.kind)) ++cumulative;
      out << format_double(e.t) << "," << to_string(e.kind) << ",";
      if (e.agent >= 0) out << e.agent + 1;
      emit_state(s);
      ++ev;
    }
    out << format_double(s.t) << ",sample,";
    emit_state(s);
  }
}

std::string trace_csv(const Trajectory& traj, int n) {
  std::ostringstream out;
  write_trace_csv(out, traj, n);
  return out.str();
}

std::string metrics_json(const ScenarioConfig& cfg, const RunMetrics& metrics,
                         const std::optional<RateCertificate>& cert, double empirical) {
  nlohmann::ordered_json doc;
  doc["scenario"] = cfg.name;
  doc["mode"] = to_string(cfg.mode);
  doc["agents"] = cfg.n;
  doc["horizon"] = cfg.horizon;
  if (cfg.h) doc["h"] = *cfg.h;
  doc["final_disagreement"] = metrics.final_disagreement;
  doc["event_count_total"] = metrics.event_count_total;
  doc["events_per_agent"] = metrics.per_agent;
  nlohmann::ordered_json gaps = nlohmann::ordered_json::array();
  for (double g : metrics.min_interevent)
    gaps.push_back(std::isfinite(g) ? nlohmann::ordered_json(g) : nlohmann::ordered_json());
  doc["min_interevent"] = gaps;
  doc["empirical_rate"] =
      std::isfinite(empirical) ? nlohmann::ordered_json(empirical) : nlohmann::ordered_json();
  if (cert) {
    doc["certificate"] = {{"A", cert->A},
                          {"rate", cert->rate},
                          {"lambda2", cert->lambda2},
                          {"lambdaN", cert->lambdaN},
                          {"d_min_out", cert->d_min_out},
                          {"sigma_max", cert->sigma_max}};
  } else {
    doc["certificate"] = nullptr;
  }
  return doc.dump(2) + "\n";
}

}  // namespace etac
