#pragma once

#include <stdexcept>
#include <string>

namespace pursuit {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A query point lies outside the playable region.
class OutsideWorld : public Error {
 public:
  using Error::Error;
};

/// d_L is not differentiable at the requested pair (tie between distinct
/// shortest paths, or coincident points).
class NonDifferentiable : public Error {
 public:
  using Error::Error;
};

/// A root finder could not bracket a sign change inside its analytic bound.
class BracketFailure : public Error {
 public:
  using Error::Error;
};

/// The requested strategy is not defined at the current state.
class StrategyInapplicable : public Error {
 public:
  using Error::Error;
};

/// The region is empty or ill-posed (d_L(x_p, x_e) <= l, alpha <= 1, ...).
class DegenerateRegion : public Error {
 public:
  using Error::Error;
};

/// Argument outside a closed-form formula's domain.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Malformed scenario / world / wire document.
class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace pursuit
