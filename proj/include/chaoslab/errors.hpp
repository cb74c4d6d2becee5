#pragma once

#include <stdexcept>

namespace chaoslab {

/// Operands disagree in order, size or partition.
struct ShapeError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// An argument lies outside the operation's domain (odd q where even is
/// required, r > min(p, q), non-symmetric kernel, ...).
struct DomainError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// A size, enumeration or overflow guard was exceeded.
struct GuardError : std::length_error {
  using std::length_error::length_error;
};

/// Malformed experiment configuration or input file.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace chaoslab
