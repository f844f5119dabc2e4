#pragma once

#include <stdexcept>
#include <string>

namespace vrbea {

/// Invalid configuration or input (bad option, unknown statistic, malformed file).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Argument outside the mathematical domain of a function.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Non-finite value produced during an iterative computation.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace vrbea
