#pragma once

#include <stdexcept>
#include <string>

namespace postmetrics {

// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DataError : public Error {
 public:
  using Error::Error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

class NumericalError : public Error {
 public:
  using Error::Error;
};

// Power iteration did not settle within its iteration budget.
class ConvergenceError : public NumericalError {
 public:
  ConvergenceError(const std::string& what, double last_estimate)
      : NumericalError(what), last_estimate_(last_estimate) {}

  double last_estimate() const noexcept { return last_estimate_; }

 private:
  double last_estimate_;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace postmetrics
