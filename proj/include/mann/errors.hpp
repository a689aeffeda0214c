#pragma once

#include <stdexcept>
#include <string>

namespace mann {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

/// A gain bound fell to or below its lower bound g_{i,0} during control.
class AssumptionError : public Error {
 public:
  using Error::Error;
};

/// Non-finite value produced while evaluating the closed loop.
class NumericError : public Error {
 public:
  NumericError(const std::string& what, double t)
      : Error(what + " (t=" + std::to_string(t) + ")"), time_(t) {}

  double time() const noexcept { return time_; }

 private:
  double time_;
};

/// A recorded norm crossed the blow-up guard.
class DivergenceError : public Error {
 public:
  DivergenceError(double t, std::string quantity, double value)
      : Error("divergence at t=" + std::to_string(t) + ": " + quantity + " = " +
              std::to_string(value)),
        time_(t),
        quantity_(std::move(quantity)),
        value_(value) {}

  double time() const noexcept { return time_; }
  const std::string& quantity() const noexcept { return quantity_; }
  double value() const noexcept { return value_; }

 private:
  double time_;
  std::string quantity_;
  double value_;
};

}  // namespace mann
