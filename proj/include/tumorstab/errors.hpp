#pragma once

#include <stdexcept>
#include <string>

namespace tumorstab {

/// Root of every failure raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad configuration or a violated modelling assumption (A1)-(A3).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Any numerical failure: bracketing, step-size underflow, truncation, residual breach.
class NumericalError : public Error {
 public:
  using Error::Error;
};

class BracketError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class StepSizeError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// Non-finite values where finite ones are required.
class DomainError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class RangeError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class ConvergenceError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// Computed output violates a documented postcondition.
class PostconditionError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// Threshold search hit the truncation cap without a tail certificate.
class TruncationError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// A quantity that theory guarantees positive came out nonpositive.
class ContradictionError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// Degree-0/1 harmonics requested from a routine defined for l >= 2.
class DegreeError : public Error {
 public:
  using Error::Error;
};

}  // namespace tumorstab
