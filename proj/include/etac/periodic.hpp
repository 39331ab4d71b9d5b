#pragma once

#include "etac/engine.hpp"
#include "etac/scenario.hpp"

namespace etac {

enum class PeriodicMode { PeriodicEventTriggered, PeriodicLaplacian };

struct PeriodicConfig {
  double h = 0.0;
  PeriodicMode mode = PeriodicMode::PeriodicEventTriggered;
  /// When true, an h violating the sufficient condition
  /// sigma_max + 4 h w_max |N_max^out| < 1 is rejected instead of
  /// warned about. The condition is sufficient, not necessary.
  bool sufficiency_check = false;
};

/// Largest h satisfying the sufficient condition for the periodically
/// checked triggers: h < (1 - sigma_max) / (4 w_max |N_max^out|).
double periodic_event_h_bound(const WeightedDigraph& g, double sigma_max);

/// Triggers evaluated only at t = 0, h, 2h, ...; all broadcasts at one
/// sample instant are evaluated against the pre-instant broadcast
/// states, applied simultaneously, and followed by one control update.
/// No forced-rebroadcast trigger: h itself lower-bounds inter-event
/// times. Requires a static (non-switching) scenario.
Trajectory run_periodic_event(const ScenarioConfig& cfg, const PeriodicConfig& pc);

/// Baseline: every agent broadcasts at every sample, so
/// x(t_{l+1}) = x(t_l) - h L x(t_l). Rejects h >= 1 / d^max.
Trajectory run_periodic_laplacian(const ScenarioConfig& cfg, const PeriodicConfig& pc);

/// Runs the scenario in its configured mode.
Trajectory run_scenario(const ScenarioConfig& cfg);

}  // namespace etac
