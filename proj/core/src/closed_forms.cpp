#include "condana/closed_forms.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "condana/errors.hpp"
#include "condana/quadrature.hpp"

namespace condana {

namespace {

constexpr double kLog2e = std::numbers::log2e;
constexpr double kLn2 = std::numbers::ln2;
constexpr unsigned kMaxIrwinHallTerms = 30;
constexpr unsigned kMaxQuadratureTerms = 16;

// Sum of 1/j for j = top, top-2, ..., down to 1 or 2, smallest terms first.
double alternate_harmonic(unsigned top) {
  double s = 0.0;
  for (unsigned j = top; j >= 1; j -= 2) {
    s += 1.0 / static_cast<double>(j);
    if (j < 2) break;
  }
  return s;
}

// prod over pairs (top/(top+1)) * ((top-2)/(top-1)) * ... down to 1/2 or 2/3.
double alternate_ratio_product(unsigned top) {
  double p = 1.0;
  for (unsigned j = top; j >= 1; j -= 2) {
    p *= static_cast<double>(j) / static_cast<double>(j + 1);
    if (j < 2) break;
  }
  return p;
}

// Neumaier-compensated accumulator.
struct CompensatedSum {
  long double sum = 0.0L;
  long double carry = 0.0L;

  void add(long double v) {
    const long double t = sum + v;
    if (std::fabs(sum) >= std::fabs(v)) {
      carry += (sum - t) + v;
    } else {
      carry += (v - t) + sum;
    }
    sum = t;
  }
  long double value() const { return sum + carry; }
};

const std::array<long double, kMaxIrwinHallTerms + 1>& inverse_factorials() {
  static const auto table = [] {
    std::array<long double, kMaxIrwinHallTerms + 1> t{};
    long double f = 1.0L;
    t[0] = 1.0L;
    for (unsigned i = 1; i <= kMaxIrwinHallTerms; ++i) {
      f *= static_cast<long double>(i);
      t[i] = 1.0L / f;
    }
    return t;
  }();
  return table;
}

void check_irwin_hall_range(unsigned m, const char* who) {
  if (m < 1 || m > kMaxIrwinHallTerms) {
    throw DomainError(std::string(who) + ": number of terms must be in [1, 30]");
  }
}

// Irwin-Hall sum over k <= floor(x) of (-1)^k (x - k)^power / (k! (m - k)!),
// for 0 <= x <= m/2 where the alternating terms stay small.
long double irwin_hall_series(unsigned m, long double x, unsigned power) {
  const auto& inv = inverse_factorials();
  CompensatedSum acc;
  const auto top = static_cast<unsigned>(std::floor(x));
  for (unsigned k = 0; k <= top && k <= m; ++k) {
    const long double term =
        std::pow(x - static_cast<long double>(k), static_cast<long double>(power)) * inv[k] *
        inv[m - k];
    acc.add((k % 2 == 0) ? term : -term);
  }
  return acc.value();
}

// CDF of the Irwin-Hall distribution (sum of m uniforms on [0, 1]).
double irwin_hall_cdf(unsigned m, double x) {
  if (x <= 0.0) return 0.0;
  if (x >= static_cast<double>(m)) return 1.0;
  const long double half = static_cast<long double>(m) / 2.0L;
  const long double lx = x;
  if (lx <= half) return static_cast<double>(irwin_hall_series(m, lx, m));
  return static_cast<double>(1.0L - irwin_hall_series(m, static_cast<long double>(m) - lx, m));
}

double irwin_hall_pdf(unsigned m, double x) {
  if (x < 0.0 || x > static_cast<double>(m)) return 0.0;
  const long double half = static_cast<long double>(m) / 2.0L;
  long double lx = x;
  if (lx > half) lx = static_cast<long double>(m) - lx;
  return static_cast<double>(static_cast<long double>(m) * irwin_hall_series(m, lx, m - 1));
}

}  // namespace

double xlogx(double y) { return y == 0.0 ? 0.0 : y * std::log(std::abs(y)); }

double wallis_integral(unsigned m) {
  double value = (m % 2 == 0) ? std::numbers::pi / 2.0 : 1.0;
  for (unsigned j = (m % 2 == 0) ? 2 : 3; j <= m; j += 2) {
    value *= static_cast<double>(j - 1) / static_cast<double>(j);
  }
  return value;
}

double log_cos_ratio(unsigned m) {
  double value = (m % 2 == 0) ? -kLn2 : -1.0;
  for (unsigned j = (m % 2 == 0) ? 2 : 3; j <= m; j += 2) {
    value -= 1.0 / static_cast<double>(j);
  }
  return value;
}

BallMoments ball_moments(unsigned m) {
  if (m < 1) throw DomainError("ball_moments: m must be >= 1");
  const double md = m;
  return {md / (md + 1.0), md / (md + 2.0), -1.0 / md};
}

CosMoments cos_moments(unsigned m) {
  if (m < 3) throw DomainError("cos_moments: m must be >= 3");
  CosMoments out{};
  out.e_cos_sq = 1.0 / static_cast<double>(m);
  if (m % 2 == 1) {
    // (m-2)(m-4)...1 / ((m-1)(m-3)...2) and -1/(m-2) - ... - 1/3 - 1
    out.e_abs_cos = alternate_ratio_product(m - 2);
    out.e_log_abs_cos = -alternate_harmonic(m - 2);
  } else {
    // (m-2)(m-4)...2 / ((m-1)(m-3)...1) * 2/pi and -1/(m-2) - ... - 1/2 - ln 2
    out.e_abs_cos = alternate_ratio_product(m - 2) * (2.0 / std::numbers::pi);
    out.e_log_abs_cos = -alternate_harmonic(m - 2) - kLn2;
  }
  return out;
}

MomentTable moment_table(unsigned m) {
  const auto ball = ball_moments(m);
  MomentTable t{m, ball.e_norm, ball.e_norm_sq, ball.e_log_norm, {}, {}, {}};
  if (m >= 3) {
    const auto cos = cos_moments(m);
    t.e_abs_cos = cos.e_abs_cos;
    t.e_cos_sq = cos.e_cos_sq;
    t.e_log_abs_cos = cos.e_log_abs_cos;
  }
  return t;
}

NormwiseRatio snc_wnc_exact(unsigned m) {
  if (m < 1) throw DomainError("snc_wnc_exact: m must be >= 1");
  NormwiseRatio out{};
  if (m % 2 == 1) {
    // m(m-2)...1 / ((m+1)(m-1)...2); gap -1/m - 1/(m-2) - ... - 1
    out.ratio = alternate_ratio_product(m);
    out.gap_bits = -alternate_harmonic(m) * kLog2e;
  } else {
    // m(m-2)...2 / ((m+1)(m-1)...1) * 2/pi; gap -1/m - ... - 1/2 - ln 2
    out.ratio = alternate_ratio_product(m) * (2.0 / std::numbers::pi);
    out.gap_bits = (-alternate_harmonic(m) - kLn2) * kLog2e;
  }
  return out;
}

bool Interval::contains(double v, double widen) const {
  const bool above = lo_strict ? v > lo - widen : v >= lo - widen;
  const bool below = hi_strict ? v < hi + widen : v <= hi + widen;
  return above && below;
}

NormwiseBounds normwise_bounds(unsigned m, unsigned n) {
  if (m < 1 || n < 1) throw DomainError("normwise_bounds: m and n must be >= 1");
  const unsigned k = std::min(m, n);
  const double md = m;
  NormwiseBounds b{m, n, k, {}, {}};
  b.ratio = {1.0 / (std::numbers::e * std::sqrt(md)), std::sqrt(k / (md + 2.0))};
  b.gap_bits = {-std::log2(md) / 2.0 - kLog2e, (std::log2(static_cast<double>(k)) - std::log2(md + 2.0)) / 2.0};
  return b;
}

double epsilon_m(unsigned m) {
  if (m <= 1) throw DomainError("epsilon_m: defined only for m > 1");
  const double md = m;
  return (2.0 + 2.0 * std::log(md)) / std::sqrt(md - 1.0);
}

ComponentwiseBounds componentwise_bounds(unsigned m) {
  if (m <= 1) throw DomainError("componentwise_bounds: m must be > 1 (m = 1 is exact: ratio 1/2)");
  const double eps = epsilon_m(m);
  const double md = m;
  ComponentwiseBounds b{m, eps, {}, {}};
  b.ratio = {std::exp(-(1.0 + eps)) / std::sqrt(3.0 * (md - 1.0)), 0.5, true, false};
  b.gap_bits = {-std::log2(md - 1.0) / 2.0 - std::log2(3.0) / 2.0 - (1.0 + eps) * kLog2e, -1.0,
                true, false};
  return b;
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }
double normal_sf(double x) { return 0.5 * std::erfc(x / std::numbers::sqrt2); }

double uniform_sum_raw_cdf(unsigned m, double s) {
  check_irwin_hall_range(m, "uniform_sum_raw_cdf");
  return irwin_hall_cdf(m, (s + static_cast<double>(m)) / 2.0);
}

double uniform_sum_cdf(unsigned m, double t) {
  check_irwin_hall_range(m, "uniform_sum_cdf");
  return uniform_sum_raw_cdf(m, t * std::sqrt(static_cast<double>(m) / 3.0));
}

double uniform_sum_density(unsigned m, double s) {
  check_irwin_hall_range(m, "uniform_sum_density");
  return 0.5 * irwin_hall_pdf(m, (s + static_cast<double>(m)) / 2.0);
}

double uniform_sum_expectation(unsigned m, const std::function<double(double)>& phi,
                               std::span<const double> singular_points, double abs_tol) {
  if (m == 0) return phi(0.0);
  if (m > kMaxQuadratureTerms) {
    throw DomainError("uniform_sum_expectation: at most 16 terms");
  }
  const double md = m;
  std::vector<double> breaks;
  for (unsigned k = 0; k <= m; ++k) breaks.push_back(-md + 2.0 * k);
  for (double p : singular_points) {
    if (p > -md && p < md) breaks.push_back(p);
  }
  return integrate_piecewise([&](double s) { return phi(s) * uniform_sum_density(m, s); },
                             std::move(breaks), abs_tol);
}

double log_abs_integral(double a) { return xlogx(a + 1.0) - xlogx(a - 1.0) - 2.0; }

double expected_log_uniform_sum(unsigned m_plus_1) {
  if (m_plus_1 < 1 || m_plus_1 > kMaxQuadratureTerms) {
    throw DomainError("expected_log_uniform_sum: number of terms must be in [1, 16]");
  }
  const double zero = 0.0;
  return uniform_sum_expectation(
      m_plus_1,
      [](double s) { return s == 0.0 ? 0.0 : std::log(std::abs(s)); },
      std::span<const double>(&zero, 1), 1e-9);
}

double entropy_term_expectation(unsigned m, double delta) {
  if (m < 1 || m > kMaxQuadratureTerms) {
    throw DomainError("entropy_term_expectation: m must be in [1, 16]");
  }
  const double md = m;
  if (!(delta > 0.0) || delta > std::sqrt(3.0 * md)) {
    throw DomainError("entropy_term_expectation: delta must be in (0, sqrt(3m)]");
  }
  const double scale = std::sqrt(md / 3.0);
  const double singular = -delta * scale;
  return uniform_sum_expectation(
      m, [&](double s) { return xlogx(s / scale + delta); },
      std::span<const double>(&singular, 1), 1e-10);
}

double entropy_term_lower_bound(unsigned m, double delta) {
  const double md = m;
  return -(2.0 * delta / std::sqrt(md)) * (std::log(1.0 + std::sqrt(3.0 * md) / delta) + 1.0);
}

double gaussian_tail_log_functional(double delta, double b) {
  if (!(delta > 0.0) || !(b > 0.0)) {
    throw DomainError("gaussian_tail_log_functional: delta and b must be positive");
  }
  auto integrand = [delta](double z) {
    const double gap = std::abs(z - delta);
    if (gap == 0.0) return 0.0;
    return normal_sf(z) * (std::log(z + delta) - std::log(gap));
  };
  std::vector<double> breaks{0.0, b};
  if (delta < b) breaks.push_back(delta);
  return xlogx(delta) + integrate_piecewise(integrand, std::move(breaks), 1e-11);
}

double log_uniform_sum_lower_bound(unsigned m) {
  if (m < 1) throw DomainError("log_uniform_sum_lower_bound: m must be >= 1");
  const double md = m;
  return std::log(md) / 2.0 - std::log(3.0) / 2.0 - 1.0 - epsilon_m(m + 1);
}

}  // namespace condana
