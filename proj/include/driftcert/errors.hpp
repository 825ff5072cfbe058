#pragma once

#include <stdexcept>
#include <string>

namespace driftcert {

/// Input violates a documented precondition (parameter out of range, inconsistent data).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Vector/matrix sizes do not agree.
class DimensionError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Chain is not irreducible, so its stationary distribution is not unique.
class ReducibleChainError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Minorization with zero mass (rows of P^m over C have disjoint support).
class DegenerateMinorizationError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// A bound curve never stays below its target within the search horizon.
class NotReachedError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Numerical procedure failed (singular system, quadrature, truncation).
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SingularSystemError : public NumericError {
 public:
  using NumericError::NumericError;
};

class HorizonTooSmallError : public NumericError {
 public:
  using NumericError::NumericError;
};

class QuadratureError : public NumericError {
 public:
  using NumericError::NumericError;
};

/// The set {PV > lambda V} is not a single bounded interval on the scan domain.
class NonIntervalError : public NumericError {
 public:
  using NumericError::NumericError;
};

}  // namespace driftcert
