#pragma once

#include <stdexcept>
#include <string>

namespace ldpkit {

// Bad input: malformed configs, inconsistent dimensions, violated preconditions.
struct validation_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Failure during computation: divergence, overflow, singular systems.
struct numerical_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace ldpkit
