#pragma once

#include <stdexcept>
#include <string>

namespace affect {

// Unreadable or unwritable sources and sinks.
struct IoError : std::runtime_error {
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

// Input data is beyond repair (e.g. mostly-malformed corpus).
struct CorruptCorpusError : std::runtime_error {
  explicit CorruptCorpusError(const std::string& what) : std::runtime_error(what) {}
};

// Bad configuration: unparseable files, infeasible parameter sets,
// degenerate seed setups.
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// A documented precondition or internal invariant was violated.
struct InvariantError : std::logic_error {
  explicit InvariantError(const std::string& what) : std::logic_error(what) {}
};

// Not enough defined data points to compute a statistic.
struct InsufficientDataError : std::runtime_error {
  explicit InsufficientDataError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace affect
