#pragma once

#include <stdexcept>
#include <string>

namespace koch {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A value could not be constructed (e.g. a zero denominator).
class ConstructionError : public Error {
 public:
  using Error::Error;
};

/// An argument lies outside the domain of a map (e.g. x outside [0,1]).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A model parameter (lambda, tolerance, depth) is out of its admissible range.
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// An exponent lies outside the open interval where an inversion is defined.
class RangeError : public Error {
 public:
  using Error::Error;
};

/// An iteration did not reach the requested accuracy before its depth cap.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

/// A request exceeds a configured size cap.
class ResourceError : public Error {
 public:
  using Error::Error;
};

/// Orbit cycle detection gave up before finding a repetition.
class UndeterminedError : public Error {
 public:
  using Error::Error;
};

}  // namespace koch
