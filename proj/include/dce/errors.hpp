#pragma once

#include <stdexcept>
#include <string>

namespace dce {

// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidDimension : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class NonFiniteValue : public Error {
 public:
  using Error::Error;
};

// A model or configuration parameter is out of range. `field()` names it.
class InvalidParameter : public Error {
 public:
  InvalidParameter(std::string field, const std::string& what)
      : Error(field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

// Closed-form coefficients hit a vanishing denominator.
class PoleError : public Error {
 public:
  PoleError(double time, const std::string& what) : Error(what), time_(time) {}
  double time() const noexcept { return time_; }

 private:
  double time_;
};

// An operation was asked for outside the regime where it applies
// (displacement diagonalization outside K/2 > g, factorized series with |alpha| >= 1).
class RegimeError : public Error {
 public:
  using Error::Error;
};

// Integration produced non-finite or runaway values.
class DivergenceError : public Error {
 public:
  DivergenceError(double time, long step, const std::string& what)
      : Error(what), time_(time), step_(step) {}
  double time() const noexcept { return time_; }
  long step() const noexcept { return step_; }

 private:
  double time_;
  long step_;
};

// A generator returned a matrix that fails the Hermiticity check.
class GeneratorError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace dce
