#pragma once

#include <stdexcept>
#include <string>

namespace sgp {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidLevelError : public Error {
 public:
  using Error::Error;
};

class InvalidScheduleError : public Error {
 public:
  using Error::Error;
};

class ScheduleTooShortError : public Error {
 public:
  using Error::Error;
};

class InvalidDesignError : public Error {
 public:
  using Error::Error;
};

class UnsupportedSmoothnessError : public Error {
 public:
  using Error::Error;
};

/// Raised when a covariance matrix fails its Cholesky factorization.
class NotPositiveDefiniteError : public Error {
 public:
  using Error::Error;
};

class ShapeError : public Error {
 public:
  using Error::Error;
};

class SingularBasisError : public Error {
 public:
  using Error::Error;
};

class NumericalFailureError : public Error {
 public:
  using Error::Error;
};

class FitFailureError : public Error {
 public:
  using Error::Error;
};

/// The dense reference solver refuses problems above its size guard.
class DenseGuardError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class UnknownFunctionError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace sgp
