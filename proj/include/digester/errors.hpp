#pragma once

#include <stdexcept>
#include <string>

namespace digester {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A parameter violates its admissible range (w >= 1, D_pipe <= 0, ...).
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// An argument is outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A state or reconstruction input is not finite.
class StateError : public Error {
 public:
  using Error::Error;
};

}  // namespace digester
