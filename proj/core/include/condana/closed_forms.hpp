#pragma once

// Closed forms for the moments, ratios and bounds that relate stochastic and
// worst-case condition numbers, plus quadrature oracles over the exact
// density of a sum of independent uniforms on [-1, 1].
//
// Product and series formulas are evaluated as running products of ratios
// and sums of reciprocals, never through factorials, so they stay finite for
// dimensions up to ~1e6.

#include <functional>
#include <optional>
#include <span>

namespace condana {

/// I_m(pi/2) = integral of sin^m over [0, pi/2], by I_m = (m-1)/m * I_{m-2}.
double wallis_integral(unsigned m);

/// J_m(pi/2) / I_m(pi/2) where J_m(pi/2) integrates sin^m(t) ln|cos t|.
double log_cos_ratio(unsigned m);

/// Moments of |u| for u uniform in the unit ball of dimension m >= 1.
struct BallMoments {
  double e_norm;      // m/(m+1)
  double e_norm_sq;   // m/(m+2)
  double e_log_norm;  // -1/m
};
BallMoments ball_moments(unsigned m);

/// Moments of cos(angle(u, v)) for fixed u and v uniform on the sphere, m >= 3.
struct CosMoments {
  double e_abs_cos;
  double e_cos_sq;
  double e_log_abs_cos;
};
CosMoments cos_moments(unsigned m);

/// Ball and cosine moments for one dimension; cosine entries exist for m >= 3.
struct MomentTable {
  unsigned m;
  double e_norm;
  double e_norm_sq;
  double e_log_norm;
  std::optional<double> e_abs_cos;
  std::optional<double> e_cos_sq;
  std::optional<double> e_log_abs_cos;
};
MomentTable moment_table(unsigned m);

/// Exact SNC/WNC ratio and SNLP - log2(WNC) (bits) for a single output.
struct NormwiseRatio {
  double ratio;
  double gap_bits;
};
NormwiseRatio snc_wnc_exact(unsigned m);

struct Interval {
  double lo;
  double hi;
  bool lo_strict = false;
  bool hi_strict = false;

  bool contains(double v, double widen = 0.0) const;
};

/// Norm-wise bounds on SNC/WNC and SNLP - log2 WNC for m inputs, n outputs.
struct NormwiseBounds {
  unsigned m;
  unsigned n;
  unsigned k;
  Interval ratio;
  Interval gap_bits;
};
NormwiseBounds normwise_bounds(unsigned m, unsigned n);

/// Componentwise bounds on SCC_j/WCC_j and SCLP_j - log2 WCC_j, m > 1.
struct ComponentwiseBounds {
  unsigned m;
  double epsilon_m;
  Interval ratio;
  Interval gap_bits;
};
ComponentwiseBounds componentwise_bounds(unsigned m);

/// (2 + 2 ln m) / sqrt(m - 1), defined for m > 1.
double epsilon_m(unsigned m);

/// Standard normal CDF and upper tail.
double normal_cdf(double x);
double normal_sf(double x);

/// P((u_1 + ... + u_m) / sqrt(m/3) <= t) for u_i iid uniform on [-1, 1],
/// 1 <= m <= 30, by the exact Irwin-Hall piecewise polynomial.
double uniform_sum_cdf(unsigned m, double t);

/// P(u_1 + ... + u_m <= s) (unstandardised), 1 <= m <= 30.
double uniform_sum_raw_cdf(unsigned m, double s);

/// Density of u_1 + ... + u_m at s, 1 <= m <= 30.
double uniform_sum_density(unsigned m, double s);

/// E phi(u_1 + ... + u_m) by quadrature against the exact density, split at
/// the density's knots and at `singular_points`. m = 0 returns phi(0).
/// Requires m <= 16.
double uniform_sum_expectation(unsigned m, const std::function<double(double)>& phi,
                               std::span<const double> singular_points = {},
                               double abs_tol = 1e-10);

/// Integral of ln|a + u| for u over [-1, 1], with 0 ln 0 = 0.
double log_abs_integral(double a);

/// E ln|u_1 + ... + u_{m_plus_1}|, 1 <= m_plus_1 <= 16.
double expected_log_uniform_sum(unsigned m_plus_1);

/// E[(W + delta) ln|W + delta|] for W = (u_1 + ... + u_m)/sqrt(m/3),
/// 1 <= m <= 16 and 0 < delta <= sqrt(3m).
double entropy_term_expectation(unsigned m, double delta);

/// -(2 delta / sqrt m) (ln(1 + sqrt(3m)/delta) + 1).
double entropy_term_lower_bound(unsigned m, double delta);

/// delta ln delta + integral over [0, b] of P(Z > z) ln|(z + delta)/(z - delta)|.
double gaussian_tail_log_functional(double delta, double b);

/// ln(m)/2 - ln(3)/2 - 1 - epsilon_{m+1}, the lower bound on
/// E ln|u_1 + ... + u_{m+1}|.
double log_uniform_sum_lower_bound(unsigned m);

/// y ln|y| with 0 ln 0 = 0.
double xlogx(double y);

}  // namespace condana
