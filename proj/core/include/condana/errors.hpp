#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace condana {

/// Argument outside the domain where a formula or oracle is defined.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Vector or matrix dimensions do not match the problem.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// f(x) (or f_j(x)) is zero, so a relative condition number is undefined.
class DegenerateOutputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An evaluation produced NaN or infinity.
class NonFiniteError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An iterative method failed to reach its tolerance.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, std::vector<double> last_iterate, double residual)
      : std::runtime_error(what), last_iterate_(std::move(last_iterate)), residual_(residual) {}

  const std::vector<double>& last_iterate() const noexcept { return last_iterate_; }
  double residual() const noexcept { return residual_; }

 private:
  std::vector<double> last_iterate_;
  double residual_;
};

}  // namespace condana
