#pragma once

#include <stdexcept>
#include <string>

namespace cstarflow {

/// Inner dimensions of a product (or an action) do not line up.
class DimensionMismatch : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Elements of a list were expected to share one shape and do not.
class ShapeMismatch : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Module elements belong to different module spaces.
class SpaceMismatch : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// An operation that requires a Hermitian input received a non-Hermitian one.
class NotHermitian : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Iterative eigensolver ran out of sweeps.
class NoConvergence : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A documented caller obligation was violated.
class PreconditionViolated : public std::logic_error {
public:
  using std::logic_error::logic_error;
};

/// Bad CLI flag, config key, or suite name. Maps to exit code 2.
class UsageError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Unreadable or unwritable report destination. Maps to exit code 2.
class IoError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

} // namespace cstarflow
