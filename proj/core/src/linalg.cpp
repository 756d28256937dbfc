#include "condana/linalg.hpp"

#include <cmath>
#include <utility>

#include "condana/errors.hpp"

namespace condana {

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows)
    : rows_(rows.size()), cols_(rows.size() == 0 ? 0 : rows.begin()->size()) {
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw DimensionError("Matrix: ragged initializer");
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::transposed() const {
  Matrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  }
  return t;
}

void multiply(const Matrix& a, std::span<const double> x, std::span<double> y) {
  for (std::size_t i = 0; i < a.rows(); ++i) {
    const auto r = a.row(i);
    double s = 0.0;
    for (std::size_t j = 0; j < r.size(); ++j) s += r[j] * x[j];
    y[i] = s;
  }
}

Vector multiply(const Matrix& a, std::span<const double> x) {
  if (x.size() != a.cols()) throw DimensionError("multiply: length mismatch");
  Vector y(a.rows());
  multiply(a, x, y);
  return y;
}

Vector multiply_transposed(const Matrix& a, std::span<const double> x) {
  if (x.size() != a.rows()) throw DimensionError("multiply_transposed: length mismatch");
  Vector y(a.cols(), 0.0);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    const auto r = a.row(i);
    for (std::size_t j = 0; j < r.size(); ++j) y[j] += r[j] * x[i];
  }
  return y;
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(std::span<const double> v) {
  // Scaled to avoid overflow/underflow for extreme entries.
  double scale = 0.0;
  for (double x : v) scale = std::max(scale, std::abs(x));
  if (scale == 0.0 || !std::isfinite(scale)) return scale;
  double sq = 0.0;
  for (double x : v) {
    const double r = x / scale;
    sq += r * r;
  }
  return scale * std::sqrt(sq);
}

double norm1(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += std::abs(x);
  return s;
}

Vector solve(const Matrix& a, std::span<const double> b) {
  const std::size_t n = a.rows();
  if (a.cols() != n || b.size() != n) throw DimensionError("solve: A must be square, b length n");
  Matrix lu = a;
  Vector x(b.begin(), b.end());
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t pivot = k;
    for (std::size_t i = k + 1; i < n; ++i) {
      if (std::abs(lu(i, k)) > std::abs(lu(pivot, k))) pivot = i;
    }
    if (lu(pivot, k) == 0.0) throw DomainError("solve: matrix is singular");
    if (pivot != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(lu(k, j), lu(pivot, j));
      std::swap(x[k], x[pivot]);
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      const double factor = lu(i, k) / lu(k, k);
      for (std::size_t j = k; j < n; ++j) lu(i, j) -= factor * lu(k, j);
      x[i] -= factor * x[k];
    }
  }
  for (std::size_t k = n; k-- > 0;) {
    double s = x[k];
    for (std::size_t j = k + 1; j < n; ++j) s -= lu(k, j) * x[j];
    x[k] = s / lu(k, k);
  }
  return x;
}

Matrix inverse(const Matrix& a) {
  const std::size_t n = a.rows();
  Matrix inv(n, n);
  Vector e(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    e.assign(n, 0.0);
    e[j] = 1.0;
    const auto col = solve(a, e);
    for (std::size_t i = 0; i < n; ++i) inv(i, j) = col[i];
  }
  return inv;
}

}  // namespace condana
