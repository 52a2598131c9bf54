#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace raf {

/// Parameter outside the model's domain (kappa > 0, point outside the disk, ...).
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A contour passes through (or numerically too close to) a zero of f.
class BoundaryZero : public std::runtime_error {
 public:
  explicit BoundaryZero(const std::string& what) : std::runtime_error(what) {}
};

/// An iterative method hit its iteration or depth cap.
class NonConvergence : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Enumeration would exceed the configured root/point budget.
class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The zero search region does not cover the pre-image of the test function support.
class CoverageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace raf
