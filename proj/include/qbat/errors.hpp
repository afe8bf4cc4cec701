#pragma once

#include <stdexcept>
#include <string>

namespace qbat {

// Incompatible operator/state dimensions.
struct DimensionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Bad user-facing input: invalid (N, K), malformed config, odd K, ...
struct ValidationError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Violated operation precondition (e.g. non-commuting generator list).
struct PreconditionError : std::logic_error {
  using std::logic_error::logic_error;
};

// Request exceeds the dense / product-formula site caps.
struct ResourceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Numerical consistency failure (lost Hermiticity, negative density, ...).
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace qbat
