// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace halfspace {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid user-supplied parameters (incompatible model/domain, CFL, ...).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// A precondition of an operation is not met by its input data.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// Floating-point trouble: overflow, non-convergent eigensolve, saturation.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// A quantity that must be strictly positive is identically zero.
class ZeroSignalError : public Error {
 public:
  using Error::Error;
};

/// Mass reached the artificial far boundary; the run is invalid.
class TruncationError : public Error {
 public:
  using Error::Error;
};

/// A time step produced values outside the admissible set.
class SchemeFailure : public Error {
 public:
  using Error::Error;
};

/// Not enough stored snapshots to evaluate a diagnostic.
class InsufficientDataError : public Error {
 public:
  using Error::Error;
};

/// The calibrated epsilon no longer satisfies the norm equivalence.
class CalibrationStaleError : public Error {
 public:
  using Error::Error;
};

}  // namespace halfspace
