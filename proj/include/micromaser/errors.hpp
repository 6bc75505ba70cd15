#pragma once

#include <stdexcept>
#include <string>

namespace micromaser {

// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Sector label outside the three-dimensional manifolds (m < 2).
class InvalidSector : public Error {
 public:
  using Error::Error;
};

// Inconsistent or out-of-range model parameters.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Linear system singular or numerically degenerate.
class SolverFailure : public Error {
 public:
  using Error::Error;
};

// Adaptive truncation or time integration did not settle.
class NonConvergence : public Error {
 public:
  using Error::Error;
};

}  // namespace micromaser
