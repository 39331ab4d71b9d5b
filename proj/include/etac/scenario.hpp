#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "etac/graph.hpp"

namespace etac {

enum class RunMode { EventDriven, PeriodicEvent, PeriodicLaplacian };

std::string to_string(RunMode mode);
std::optional<RunMode> parse_run_mode(const std::string& text);

/// A complete run description: the graph (or switching schedule), the
/// initial condition, trigger parameters, horizon and execution mode.
/// `load_scenario` (scenario_io.hpp) is the validated entry point; the
/// fields are plain data so tests can assemble configs directly.
struct ScenarioConfig {
  std::string name;
  int n = 0;
  std::vector<WeightedDigraph> graphs;
  /// (activation time, graph index); strictly increasing, starts at 0.
  std::vector<std::pair<double, int>> schedule;
  Vector x0;
  Vector sigma;                    // per-agent
  std::optional<Vector> epsilon;   // per-agent; engine defaults when absent
  double horizon = 0.0;
  RunMode mode = RunMode::EventDriven;
  std::optional<double> h;         // sampling period for the periodic modes
  bool cooldown = true;            // forced-rebroadcast trigger on/off
  double sample_dt = 0.01;         // trajectory logging grid
  double zeno_ceiling = 1e5;       // broadcast events allowed per unit time
  bool sufficiency_check = false;  // periodic-event: reject h that violates the bound

  bool operator==(const ScenarioConfig& other) const;

  const WeightedDigraph& graph_at(double t) const;
};

}  // namespace etac
