#pragma once

// Differentiable problems f: R^m -> R^n with evaluation and Jacobians.

#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "condana/linalg.hpp"

namespace condana {

enum class JacobianKind { analytic, finite_difference };

struct Problem {
  using Evaluator = std::function<Vector(std::span<const double>)>;
  using JacobianFn = std::function<Matrix(std::span<const double>)>;

  std::string name;
  std::size_t m = 0;
  std::size_t n = 0;
  Evaluator evaluator;
  /// Returns the n x m matrix whose row j is grad f_j(x). May be empty.
  JacobianFn analytic_jacobian;
  /// Fixed constants such as the matrix of a linear problem (may be empty).
  Matrix parameters;
  bool linear = false;

  JacobianKind jacobian_kind() const {
    return analytic_jacobian ? JacobianKind::analytic : JacobianKind::finite_difference;
  }
};

/// n x m matrix G^T (row j = grad f_j(x)^T) and the point it was taken at.
struct Jacobian {
  Matrix entries;
  Vector point;
};

/// f(x). Throws DimensionError on length mismatch and NonFiniteError if f(x)
/// is not finite.
Vector evaluate(const Problem& p, std::span<const double> x);

/// Analytic Jacobian when the problem has one, else fd_jacobian with the
/// default step.
Jacobian jacobian(const Problem& p, std::span<const double> x);

inline constexpr double kDefaultFdScale = 1e-5;

/// Central differences with step h_i = h_scale * max(|x_i|, 1).
Jacobian fd_jacobian(const Problem& p, std::span<const double> x,
                     double h_scale = kDefaultFdScale);

struct ProblemDescriptor {
  std::string name;
  std::string summary;
  std::size_t default_m;
  bool flexible_dimension;
  bool linear;
  /// Documented test point (length default_m).
  Vector test_point;
};

std::vector<ProblemDescriptor> list_problems();

/// Builds a corpus problem. Dimension-flexible problems take `m` (default:
/// the descriptor's default_m); fixed ones reject a different m.
Problem make_problem(std::string_view name, std::optional<std::size_t> m = std::nullopt);

/// f(x) = A x.
Problem linear_problem(std::string name, Matrix a);

/// Reads a linear problem from a text file: first line "n m", then n rows of
/// m whitespace-separated decimals.
Problem load_matrix_problem(const std::filesystem::path& path);
Matrix parse_matrix(std::string_view text);

}  // namespace condana
