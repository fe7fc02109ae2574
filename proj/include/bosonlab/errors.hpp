#pragma once

#include <stdexcept>
#include <string>

namespace bosonlab {

/// Root of all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Inputs outside the mathematical domain of an operation (invalid Stokes
/// vector, n outside (0, N), trace-increasing device map, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Caller broke a precondition: mismatched spaces, non-Hermitian generator,
/// missing mean-field reference state.
class ContractViolation : public Error {
 public:
  using Error::Error;
};

/// A basis would exceed the configured dimension limit.
class ResourceError : public Error {
 public:
  using Error::Error;
};

/// Operator not representable in the requested space (single ladder
/// operators leave a fixed-number sector).
class UnsupportedOperator : public Error {
 public:
  using Error::Error;
};

/// Two-beam normalization <n_a n_b> vanishes.
class NormalizationUndefined : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Time integration lost the structure it is supposed to preserve.
class IntegrationFailure : public Error {
 public:
  using Error::Error;
};

/// Not enough points for a log-log fit.
class FitError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Malformed or unknown configuration. The message carries file:line when
/// the problem was found in a config file.
class ConfigError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// File could not be read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

/// A run produced a result that contradicts a proven inequality or a
/// conservation law; indicates a bug, not bad input.
class InvariantViolation : public Error {
 public:
  using Error::Error;
};

}  // namespace bosonlab
