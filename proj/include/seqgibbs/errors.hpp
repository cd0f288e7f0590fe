#pragma once

#include <stdexcept>
#include <string>

namespace seqgibbs {

/// Malformed or unusable input data (CSV parse failures, ragged rows, ...).
struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Numerical failure at runtime (rejection cap exceeded, non-PD matrix,
/// degenerate eigengap, NaN in a target density, ...).
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace seqgibbs
