#include "etac/scenario.hpp"

namespace etac {

std::string to_string(RunMode mode) {
  switch (mode) {
    case RunMode::EventDriven: return "event";
    case RunMode::PeriodicEvent: return "periodic-event";
    case RunMode::PeriodicLaplacian: return "periodic-laplacian";
  }
  return "event";
}

std::optional<RunMode> parse_run_mode(const std::string& text) {
  if (text == "event") return RunMode::EventDriven;
  if (text == "periodic-event") return RunMode::PeriodicEvent;
  if (text == "periodic-laplacian") return RunMode::PeriodicLaplacian;
  return std::nullopt;
}

bool ScenarioConfig::operator==(const ScenarioConfig& other) const {
  return name == other.name && n == other.n && graphs == other.graphs &&
         schedule == other.schedule && x0 == other.x0 && sigma == other.sigma &&
         epsilon == other.epsilon && horizon == other.horizon && mode == other.mode &&
         h == other.h && cooldown == other.cooldown && sample_dt == other.sample_dt &&
         zeno_ceiling == other.zeno_ceiling && sufficiency_check == other.sufficiency_check;
}

const WeightedDigraph& ScenarioConfig::graph_at(double t) const {
  int idx = schedule.front().second;
  for (const auto& [time, gi] : schedule) {
    if (time <= t) idx = gi;
    else break;
  }
  return graphs[idx];
}

}  // namespace etac
