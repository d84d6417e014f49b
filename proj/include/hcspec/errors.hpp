#pragma once

#include <stdexcept>
#include <string>

namespace hcspec {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent input (geometry, configuration, arguments).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// A location or index outside the domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Numerical failure: factorization breakdown, non-convergence, singular reduced system.
class SolverError : public Error {
 public:
  using Error::Error;
};

/// Iterative method exhausted its iteration budget.
class ConvergenceError : public SolverError {
 public:
  using SolverError::SolverError;
};

/// The spectral parameter sits on (or within tolerance of) a pole of a characteristic function.
class PoleError : public Error {
 public:
  PoleError(const std::string& what, double location) : Error(what), location_(location) {}
  double location() const { return location_; }

 private:
  double location_;
};

/// Right-hand side violates the Fredholm solvability condition (Neumann with non-zero mean).
class SolvabilityError : public Error {
 public:
  using Error::Error;
};

/// A root scan missed roots: the bracket count disagrees with an exact eigenvalue count.
class ScanResolutionError : public Error {
 public:
  ScanResolutionError(const std::string& what, int expected, int found)
      : Error(what), expected_(expected), found_(found) {}
  int expected() const { return expected_; }
  int found() const { return found_; }

 private:
  int expected_;
  int found_;
};

}  // namespace hcspec
