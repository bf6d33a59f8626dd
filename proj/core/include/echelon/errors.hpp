#pragma once

#include <stdexcept>
#include <string>

namespace echelon {

/// Scenario or demand model violates its invariants.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Caller passed an argument outside the operation's domain.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Operation invoked in the wrong phase, e.g. stepping a finished episode.
class LifecycleError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class LookupError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// No admissible bracketed action in a model response.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Chat endpoint unreachable, timed out, or returned a non-success status.
class TransportError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Reached only if the dynamics produce a state that breaks a conservation law.
class InvariantError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace echelon
