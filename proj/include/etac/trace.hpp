#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "etac/analysis.hpp"
#include "etac/engine.hpp"
#include "etac/scenario.hpp"

namespace etac {

/// Comma-separated trace with header
///   t,kind,agent,x_1,...,x_n,V,N_E
/// One row per logged event (kind trigger/cascade/switch/periodic,
/// 1-based agent id, blank for switches) and one per trajectory sample
/// (kind "sample", blank agent). Rows are time-ordered; N_E is the
/// cumulative broadcast count. Identical runs produce identical bytes.
std::string trace_csv(const Trajectory& traj, int n);
void write_trace_csv(std::ostream& out, const Trajectory& traj, int n);

/// Metrics summary as a JSON document.
std::string metrics_json(const ScenarioConfig& cfg, const RunMetrics& metrics,
                         const std::optional<RateCertificate>& cert, double empirical);

}  // namespace etac
