#pragma once

#include <stdexcept>
#include <string>

namespace etac {

/// Base class for all errors raised by the library.
struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Invalid configuration, graph, or parameter (maps to CLI exit code 1).
struct ValidationError : Error {
  explicit ValidationError(const std::string& what) : Error(what) {}
};

/// Malformed scenario file; carries the offending line number (1-based).
struct SchemaError : ValidationError {
  SchemaError(int line_, const std::string& what)
      : ValidationError("line " + std::to_string(line_) + ": " + what), line(line_) {}
  int line;
};

/// Failure while a simulation or computation is running (CLI exit code 2).
struct SimulationError : Error {
  explicit SimulationError(const std::string& what) : Error(what) {}
};

/// The events-per-unit-time diagnostic ceiling was exceeded.
struct ZenoGuardError : SimulationError {
  explicit ZenoGuardError(const std::string& what) : SimulationError(what) {}
};

/// An agent would have broadcast twice at one instant.
struct CascadeOverflowError : SimulationError {
  explicit CascadeOverflowError(const std::string& what) : SimulationError(what) {}
};

/// Internal state violates a trigger admissibility precondition.
struct InconsistentStateError : SimulationError {
  explicit InconsistentStateError(const std::string& what) : SimulationError(what) {}
};

/// Symmetric eigenvalue iteration failed to reach its tolerance.
struct EigenConvergenceError : SimulationError {
  explicit EigenConvergenceError(const std::string& what) : SimulationError(what) {}
};

/// A caller violated a documented operation precondition.
struct PreconditionError : SimulationError {
  explicit PreconditionError(const std::string& what) : SimulationError(what) {}
};

}  // namespace etac
