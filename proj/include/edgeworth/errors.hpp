#pragma once

#include <stdexcept>
#include <string>

namespace edgeworth {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A numeric argument is outside its documented domain.
class InvalidParameter : public Error {
 public:
  using Error::Error;
};

/// The model inputs are valid but the requested object does not exist for them
/// (e.g. an equilibrium whose existence conditions fail).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

class DegenerateDemand : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

class ConditionsViolated : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

class WrongVariant : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

class NoFixedPoint : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

/// Raised when a computed quantity contradicts an identity it must satisfy.
/// Indicates a bug, never bad input.
class InternalConsistency : public Error {
 public:
  using Error::Error;
};

}  // namespace edgeworth
