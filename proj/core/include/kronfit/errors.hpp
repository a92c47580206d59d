#pragma once

#include <stdexcept>
#include <string>

namespace kronfit {

/// Base class for all kronfit errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// A caller-supplied argument violates a precondition (bad mode index,
/// non-ascending list, empty dims, dimension overflow, ...).
class InvalidInput : public Error {
 public:
  using Error::Error;
};

/// A matrix that must be positive definite fails the spectral check.
class NotPositiveDefinite : public Error {
 public:
  using Error::Error;
};

/// A dense realization or auxiliary operator would exceed the size cap.
class TooLarge : public Error {
 public:
  using Error::Error;
};

/// A serialized file fails magic/header/payload validation.
class FormatError : public Error {
 public:
  using Error::Error;
};

/// The data is degenerate for the requested quantity (e.g. all-zero samples).
class DegenerateInput : public Error {
 public:
  using Error::Error;
};

/// An iterative numerical routine failed to converge within its budget.
class NumericalFailure : public Error {
 public:
  using Error::Error;
};

/// A mode marginal required to be invertible is numerically singular.
class SingularMarginal : public Error {
 public:
  using Error::Error;
};

}  // namespace kronfit
