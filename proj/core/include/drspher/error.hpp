#pragma once

#include <stdexcept>
#include <string>

namespace drspher {

/// Input outside the mathematical domain of an operation (bad parameters,
/// negative radii, strip violations, malformed grids).
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A numerical procedure did not reach its accuracy contract.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Spectral or radial data that is not negligible at the edge of its grid.
class TruncationError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// Malformed CSV / config input.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace drspher
