#pragma once

#include <stdexcept>
#include <string>

namespace latflow {

/// Malformed dimension, side lengths, distribution parameters or scale.
class SpecError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Unknown key or unparsable value in a run configuration.
class ConfigError : public SpecError {
 public:
  using SpecError::SpecError;
};

/// A coordinate, plane or cube falls outside the lattice window.
class RangeError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// Caller violated an operation's documented precondition.
class ContractError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// An operation's precondition on the random configuration failed
/// (for example the open cluster reaches the window boundary).
class PreconditionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A computed structure violated a property that must hold on every
/// realization. Indicates a bug, never a statistical fluctuation.
class PropertyViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Exit lists of two cutsets do not agree under the unit shift.
class ExitMismatch : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Memory guard tripped; the message carries the attempted size.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace latflow
