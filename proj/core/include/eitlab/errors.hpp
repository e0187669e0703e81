#pragma once

#include <stdexcept>
#include <string>

namespace eitlab {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad input: violated preconditions, inconsistent parameters, CFL violations.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// The computation itself failed (NaN/overflow, unstable derivative estimates).
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// A field reached the edge of the periodic domain and would wrap around.
class WrapHazardError : public Error {
 public:
  using Error::Error;
};

}  // namespace eitlab
