#pragma once

#include <stdexcept>
#include <string>

namespace hetnet {

/// Invalid model parameter or precondition violation.
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Receiver and transmitter coincide; the path-loss law is singular there.
class SingularityError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A quadrature failed to reach its tolerance. Carries the error it did reach.
class NumericError : public std::runtime_error {
 public:
  NumericError(const std::string& what, double achieved_error)
      : std::runtime_error(what), achieved_error_(achieved_error) {}

  double achieved_error() const noexcept { return achieved_error_; }

 private:
  double achieved_error_;
};

/// Malformed or inconsistent run configuration.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace hetnet
