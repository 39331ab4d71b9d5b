#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "etac/scenario.hpp"

namespace etac {

/// Load-time adjustments and relaxations. Overrides are applied before
/// validation, so e.g. overriding the mode to periodic-event makes an h
/// override mandatory-consistent the way a file-level h would be.
struct LoadOptions {
  bool allow_unbalanced = false;  // demote the weight-balance error to a warning
  std::optional<RunMode> mode;
  std::optional<double> h;
  std::optional<double> horizon;
  std::optional<double> sigma;    // scalar, applied to every agent
  std::optional<bool> cooldown;
};

/// Parses and validates a scenario file. Schema problems raise
/// SchemaError with the offending line; semantic problems raise
/// ValidationError naming the violated invariant.
ScenarioConfig load_scenario(const std::string& path, const LoadOptions& opts = {});

/// Stream-level parser; `display_name` seeds the default scenario name.
ScenarioConfig parse_scenario(std::istream& in, const std::string& display_name,
                              const LoadOptions& opts = {});

/// Canonical writer. load(save(cfg)) == cfg for every valid config.
void save_scenario(const ScenarioConfig& cfg, std::ostream& out);
std::string scenario_text(const ScenarioConfig& cfg);

}  // namespace etac
