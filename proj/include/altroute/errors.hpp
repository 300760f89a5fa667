#pragma once

#include <stdexcept>
#include <string>

namespace altroute {

/// Argument outside the mathematical domain of an operation (e.g. negative flow).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Shapes or indices that do not fit the network (wrong matrix size, bad player).
class StructuralError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Network parameters outside the regime an operation is valid for.
/// The message names the violated inequality.
class RegimeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Invalid solver or oracle configuration.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A solver produced output that fails its own post-condition.
class ConsistencyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Scenario file errors; carries the offending line (1-based, 0 if unknown).
class ParseError : public std::runtime_error {
 public:
  ParseError(int line, const std::string& what)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}
  int line() const noexcept { return line_; }

 private:
  int line_;
};

}  // namespace altroute
