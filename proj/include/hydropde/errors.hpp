#pragma once

#include <stdexcept>
#include <string>

namespace hydropde {

/// Inconsistent shapes, grids or invalid configuration values.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation (p < 1, t < 0, ...).
struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

/// Resolvent requested at a point of the spectrum.
struct SingularSolve : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Time stepping produced a non-finite state or violated its stability bound.
struct StabilityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace hydropde
