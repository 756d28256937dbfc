#include "condana/problems.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "condana/errors.hpp"

namespace condana {

namespace {

void check_length(const Problem& p, std::span<const double> x) {
  if (x.size() != p.m) {
    throw DimensionError(p.name + ": expected input of length " + std::to_string(p.m) + ", got " +
                         std::to_string(x.size()));
  }
}

Problem identity_problem(std::size_t m) {
  Problem p{"identity", m, m, nullptr, nullptr, {}, true};
  p.evaluator = [](std::span<const double> x) { return Vector(x.begin(), x.end()); };
  p.analytic_jacobian = [m](std::span<const double>) { return Matrix::identity(m); };
  return p;
}

Problem scale_problem(std::size_t m, double c) {
  Problem p{"scale", m, m, nullptr, nullptr, Matrix{{c}}, true};
  p.evaluator = [c](std::span<const double> x) {
    Vector y(x.begin(), x.end());
    for (double& v : y) v *= c;
    return y;
  };
  p.analytic_jacobian = [m, c](std::span<const double>) {
    Matrix j = Matrix::identity(m);
    for (std::size_t i = 0; i < m; ++i) j(i, i) = c;
    return j;
  };
  return p;
}

Problem sum_problem(std::size_t m) {
  Problem p{"sum", m, 1, nullptr, nullptr, {}, true};
  p.evaluator = [](std::span<const double> x) {
    double s = 0.0;
    for (double v : x) s += v;
    return Vector{s};
  };
  p.analytic_jacobian = [m](std::span<const double>) { return Matrix(1, m, 1.0); };
  return p;
}

Problem product_problem(std::size_t m) {
  Problem p{"product", m, 1, nullptr, nullptr, {}, false};
  p.evaluator = [](std::span<const double> x) {
    double prod = 1.0;
    for (double v : x) prod *= v;
    return Vector{prod};
  };
  // d/dx_i prod = product of the other entries; prefix/suffix products avoid
  // dividing by x_i.
  p.analytic_jacobian = [m](std::span<const double> x) {
    Matrix j(1, m);
    double prefix = 1.0;
    for (std::size_t i = 0; i < m; ++i) {
      j(0, i) = prefix;
      prefix *= x[i];
    }
    double suffix = 1.0;
    for (std::size_t i = m; i-- > 0;) {
      j(0, i) *= suffix;
      suffix *= x[i];
    }
    return j;
  };
  return p;
}

Problem horner_problem() {
  // Input (a0, a1, a2, a3, t) -> a0 + a1 t + a2 t^2 + a3 t^3.
  constexpr std::size_t degree = 3;
  Problem p{"horner", degree + 2, 1, nullptr, nullptr, {}, false};
  p.evaluator = [](std::span<const double> x) {
    const double t = x[degree + 1];
    double acc = x[degree];
    for (std::size_t i = degree; i-- > 0;) acc = acc * t + x[i];
    return Vector{acc};
  };
  p.analytic_jacobian = [](std::span<const double> x) {
    const double t = x[degree + 1];
    Matrix j(1, degree + 2);
    double power = 1.0;
    for (std::size_t i = 0; i <= degree; ++i) {
      j(0, i) = power;
      power *= t;
    }
    double deriv = degree * x[degree];
    for (std::size_t i = degree; i-- > 1;) deriv = deriv * t + static_cast<double>(i) * x[i];
    j(0, degree + 1) = deriv;
    return j;
  };
  return p;
}

Problem solve_problem(std::string name, Matrix a) {
  const std::size_t n = a.rows();
  Matrix a_inv = inverse(a);
  Problem p{std::move(name), n, n, nullptr, nullptr, a, true};
  p.evaluator = [a = std::move(a)](std::span<const double> b) { return solve(a, b); };
  p.analytic_jacobian = [a_inv = std::move(a_inv)](std::span<const double>) { return a_inv; };
  return p;
}

const Vector kDotWeights{1.0, -2.0, 3.0};

const Matrix& matvec_matrix() {
  static const Matrix a{{2.0, -1.0, 0.0}, {-1.0, 2.0, -1.0}, {0.0, -1.0, 2.0}};
  return a;
}

const Matrix& well_conditioned_matrix() {
  static const Matrix a{{4.0, 1.0}, {2.0, 3.0}};
  return a;
}

// R diag(1, 1e-4) R^T with R the 45-degree rotation: condition number 1e4.
const Matrix& ill_conditioned_matrix() {
  static const Matrix a{{0.50005, 0.49995}, {0.49995, 0.50005}};
  return a;
}

}  // namespace

Vector evaluate(const Problem& p, std::span<const double> x) {
  check_length(p, x);
  Vector y = p.evaluator(x);
  if (y.size() != p.n) {
    throw DimensionError(p.name + ": evaluator returned " + std::to_string(y.size()) +
                         " outputs, expected " + std::to_string(p.n));
  }
  for (double v : y) {
    if (!std::isfinite(v)) throw NonFiniteError(p.name + ": non-finite output");
  }
  return y;
}

Jacobian jacobian(const Problem& p, std::span<const double> x) {
  check_length(p, x);
  if (!p.analytic_jacobian) return fd_jacobian(p, x);
  Jacobian jac{p.analytic_jacobian(x), Vector(x.begin(), x.end())};
  if (jac.entries.rows() != p.n || jac.entries.cols() != p.m) {
    throw DimensionError(p.name + ": analytic Jacobian has wrong shape");
  }
  return jac;
}

Jacobian fd_jacobian(const Problem& p, std::span<const double> x, double h_scale) {
  check_length(p, x);
  if (!(h_scale > 0.0)) throw DomainError("fd_jacobian: h_scale must be positive");
  Jacobian jac{Matrix(p.n, p.m), Vector(x.begin(), x.end())};
  Vector probe(x.begin(), x.end());
  for (std::size_t i = 0; i < p.m; ++i) {
    const double h = h_scale * std::max(std::abs(x[i]), 1.0);
    probe[i] = x[i] + h;
    const Vector plus = evaluate(p, probe);
    probe[i] = x[i] - h;
    const Vector minus = evaluate(p, probe);
    probe[i] = x[i];
    // Divide by the step actually realised in floating point.
    const double width = (x[i] + h) - (x[i] - h);
    for (std::size_t j = 0; j < p.n; ++j) jac.entries(j, i) = (plus[j] - minus[j]) / width;
  }
  return jac;
}

std::vector<ProblemDescriptor> list_problems() {
  return {
      {"identity", "f(x) = x", 2, true, true, {1.0, 1.0}},
      {"scale", "f(x) = 3 x", 2, true, true, {1.0, 2.0}},
      {"sum", "f(x) = x_1 + ... + x_m", 2, true, true, {1.0, 1.0}},
      {"dot", "f(x) = w^T x, w = (1, -2, 3)", 3, false, true, {1.0, 1.0, 1.0}},
      {"product", "f(x) = x_1 x_2 ... x_m", 2, true, false, {1.0, 1.0}},
      {"horner", "f(a0, a1, a2, a3, t) = a0 + a1 t + a2 t^2 + a3 t^3", 5, false, false,
       {1.0, -2.0, 0.5, 1.0, 1.5}},
      {"matvec", "f(x) = A x, A = tridiag(-1, 2, -1) 3x3", 3, false, true, {1.0, 1.0, 2.0}},
      {"solve_well", "f(b) = A^{-1} b, A = [[4, 1], [2, 3]]", 2, false, true, {1.0, 1.0}},
      {"solve_ill", "f(b) = A^{-1} b, A = [[0.50005, 0.49995], [0.49995, 0.50005]], cond 1e4",
       2, false, true, {1.0, 1.0}},
  };
}

Problem make_problem(std::string_view name, std::optional<std::size_t> m) {
  const auto corpus = list_problems();
  const auto it = std::find_if(corpus.begin(), corpus.end(),
                               [&](const ProblemDescriptor& d) { return d.name == name; });
  if (it == corpus.end()) throw DomainError("unknown problem '" + std::string(name) + "'");
  const std::size_t dim = m.value_or(it->default_m);
  if (dim == 0) throw DimensionError("problem dimension must be positive");
  if (!it->flexible_dimension && dim != it->default_m) {
    throw DimensionError(it->name + " has fixed input dimension " +
                         std::to_string(it->default_m));
  }
  if (name == "identity") return identity_problem(dim);
  if (name == "scale") return scale_problem(dim, 3.0);
  if (name == "sum") return sum_problem(dim);
  if (name == "product") return product_problem(dim);
  if (name == "horner") return horner_problem();
  if (name == "dot") {
    Matrix w(1, kDotWeights.size());
    for (std::size_t i = 0; i < kDotWeights.size(); ++i) w(0, i) = kDotWeights[i];
    return linear_problem("dot", std::move(w));
  }
  if (name == "matvec") return linear_problem("matvec", matvec_matrix());
  if (name == "solve_well") return solve_problem("solve_well", well_conditioned_matrix());
  return solve_problem("solve_ill", ill_conditioned_matrix());
}

Problem linear_problem(std::string name, Matrix a) {
  Problem p{std::move(name), a.cols(), a.rows(), nullptr, nullptr, a, true};
  p.evaluator = [a](std::span<const double> x) { return multiply(a, x); };
  p.analytic_jacobian = [a](std::span<const double>) { return a; };
  return p;
}

Matrix parse_matrix(std::string_view text) {
  std::vector<std::string_view> tokens;
  std::size_t pos = 0;
  while (pos < text.size()) {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    const std::size_t start = pos;
    while (pos < text.size() && !std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    if (pos > start) tokens.push_back(text.substr(start, pos - start));
  }
  auto parse_double = [](std::string_view tok) {
    double v = 0.0;
    const auto* first = tok.data();
    const auto* last = tok.data() + tok.size();
    if (!tok.empty() && *first == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last || !std::isfinite(v)) {
      throw DomainError("matrix file: malformed number '" + std::string(tok) + "'");
    }
    return v;
  };
  if (tokens.size() < 2) throw DomainError("matrix file: missing 'n m' header");
  const double rows_d = parse_double(tokens[0]);
  const double cols_d = parse_double(tokens[1]);
  if (rows_d < 1 || cols_d < 1 || rows_d != std::floor(rows_d) || cols_d != std::floor(cols_d)) {
    throw DomainError("matrix file: header must be two positive integers");
  }
  const auto rows = static_cast<std::size_t>(rows_d);
  const auto cols = static_cast<std::size_t>(cols_d);
  if (tokens.size() != 2 + rows * cols) {
    throw DimensionError("matrix file: expected " + std::to_string(rows * cols) +
                         " entries, found " + std::to_string(tokens.size() - 2));
  }
  Matrix a(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) a(i, j) = parse_double(tokens[2 + i * cols + j]);
  }
  return a;
}

Problem load_matrix_problem(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open matrix file " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return linear_problem("matrix:" + path.filename().string(), parse_matrix(buffer.str()));
}

}  // namespace condana
