#pragma once

#include <stdexcept>
#include <string>

namespace cvfid {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument lies outside the domain of the operation (negative photon
/// number, fraction outside [0,1], invalid covariance matrix, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A quantity is mathematically undefined for the given input, e.g. the Fano
/// factor of the vacuum.
class UndefinedQuantityError : public Error {
 public:
  using Error::Error;
};

/// A closed form produced a value that violates its own guarantees by more
/// than the rounding tolerance.
class NumericalConsistencyError : public Error {
 public:
  using Error::Error;
};

/// The Fock truncation loses more probability than allowed.
class CutoffError : public Error {
 public:
  using Error::Error;
};

/// Operands do not live in the same space.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Invalid scan or CLI configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// A state file could not be read or does not describe a valid state.
class StateFileError : public Error {
 public:
  using Error::Error;
};

}  // namespace cvfid
