#pragma once

#include <stdexcept>
#include <string>

namespace divmean {

// Argument outside the range a table or grid was built for.
class RangeError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

// Request would exceed the configured memory budget.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Argument outside the mathematical domain (pole, u <= 0, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Root finder or Newton refinement did not converge.
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// |g| on a contour dropped below the safety margin.
class ContourError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid user-supplied configuration (theta rule, f-spec, ...).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace divmean
