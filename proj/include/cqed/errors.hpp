#pragma once

#include <stdexcept>
#include <string>

namespace cqed {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A device/trap/condensate specification violates its invariants.
class SpecError : public Error {
 public:
  using Error::Error;
};

/// An argument lies outside the domain of a formula (e.g. y_0 <= 0).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Configuration text could not be parsed or contains unknown keys/units.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Integrator or consistency failure (step underflow, trace drift, ...).
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// Requested Hilbert space exceeds the configured size limits.
class ResourceError : public Error {
 public:
  using Error::Error;
};

/// Fock truncation too small for the requested thermal occupancy.
class CutoffError : public Error {
 public:
  using Error::Error;
};

/// Output files could not be written.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace cqed
