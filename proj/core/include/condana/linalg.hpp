#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace condana {

using Vector = std::vector<double>;

/// Dense row-major matrix.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  Matrix(std::initializer_list<std::initializer_list<double>> rows);

  static Matrix identity(std::size_t n);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<double> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
  std::span<const double> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }

  std::span<const double> data() const noexcept { return data_; }

  Matrix transposed() const;

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// y = A x; y.size() must equal A.rows().
void multiply(const Matrix& a, std::span<const double> x, std::span<double> y);
Vector multiply(const Matrix& a, std::span<const double> x);

/// y = A^T x.
Vector multiply_transposed(const Matrix& a, std::span<const double> x);

double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> v);
double norm1(std::span<const double> v);

/// Solves A x = b by Gaussian elimination with partial pivoting. A square.
Vector solve(const Matrix& a, std::span<const double> b);

/// A^{-1} by solving against the unit vectors.
Matrix inverse(const Matrix& a);

}  // namespace condana
