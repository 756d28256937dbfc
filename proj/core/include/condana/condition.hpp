#pragma once

// Worst-case and stochastic condition numbers of a differentiable problem at
// a point, norm-wise (ball perturbations) and componentwise (box
// perturbations), plus the matching losses of precision in bits.
//
//   WNC     = |x| |G| / |f(x)|                   (G^T = Jacobian, |G| = sigma_1)
//   WCC_j   = |g|_1 / |f_j(x)|,  g_i = x_i df_j/dx_i
//   SNC     = E |G^T (|x| u)| / |f(x)|,          u uniform in the unit ball
//   SCC_j   = E |u^T g| / |f_j(x)|,              u uniform in [-1, 1]^m
//   SNLP    = E log2 of the SNC integrand, SCLP_j likewise.

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "condana/monte_carlo.hpp"
#include "condana/problems.hpp"
#include "condana/rand_geom.hpp"

namespace condana {

/// A condition number that may be infinite (f or f_j vanishes at x).
struct ConditionNumber {
  double value = 0.0;
  bool infinite = false;

  static ConditionNumber infinity() { return {0.0, true}; }
};

enum class EstimatorMode { linearized, finite_delta };

struct EstimatorConfig {
  std::size_t samples = 100000;
  SampleStream stream{42};
  /// linearized samples the first-order model G^T u directly; finite_delta
  /// evaluates f on the perturbation region for each entry of `deltas`.
  EstimatorMode mode = EstimatorMode::linearized;
  std::vector<double> deltas;
  double confidence = 0.99;
  unsigned threads = 0;

  void validate() const;
};

/// Estimates of E q and E log2 q for one stochastic quantity q.
struct RatioEstimates {
  Estimate value;
  Estimate log2;
  /// False when q is identically zero (zero gradient), so E log2 q = -inf.
  bool log_defined = true;
};

/// Finite-delta estimate at one perturbation size.
struct DeltaPoint {
  double delta = 0.0;
  RatioEstimates estimate;
  /// Some perturbation rounded away (x' == x or f(x') == f(x)).
  bool underflow = false;
};

struct SncResult {
  RatioEstimates estimate;
  std::optional<double> exact;       // n = 1 only
  std::optional<double> exact_snlp;  // n = 1 only, bits
  std::vector<DeltaPoint> trend;     // finite_delta mode only
};

struct SccResult {
  RatioEstimates estimate;
  std::optional<double> exact;  // at most 3 nonzero g_i
  std::vector<DeltaPoint> trend;
};

/// Largest singular value. Matrices with a dimension <= 2 use closed forms;
/// larger ones power iteration on the smaller Gram operator (relative
/// tolerance 1e-12 on sigma_1^2, at most 1e4 iterations, fixed random start).
/// Throws ConvergenceError carrying the last iterate and residual.
double spectral_norm(const Matrix& a);
inline double spectral_norm(const Jacobian& g) { return spectral_norm(g.entries); }

ConditionNumber wnc(const Problem& p, std::span<const double> x);
ConditionNumber wcc(const Problem& p, std::span<const double> x, std::size_t j);

/// g_i = x_i * (row j of the Jacobian)_i.
Vector componentwise_weights(const Jacobian& jac, std::size_t j);

/// E|G^T u| * scale and E log2(|G^T u| * scale), u uniform in the unit ball,
/// with G^T = jt (n x m). Sample draws match finite-delta mode.
RatioEstimates estimate_normwise(const Matrix& jt, double scale, const EstimatorConfig& cfg);

/// E|u^T g| * scale and its log2 counterpart, u uniform in [-1, 1]^m.
RatioEstimates estimate_componentwise(std::span<const double> g, double scale,
                                      const EstimatorConfig& cfg);

/// Exact E|u^T g| for u uniform in [-1, 1]^m when g has at most three
/// nonzero entries of comparable size (ratio >= 1e-4); nullopt otherwise.
std::optional<double> exact_mean_abs_projection(std::span<const double> g);

SncResult snc(const Problem& p, std::span<const double> x, const EstimatorConfig& cfg);
SccResult scc(const Problem& p, std::span<const double> x, std::size_t j,
              const EstimatorConfig& cfg);

struct OutputCondition {
  std::size_t j = 0;
  double f_j = 0.0;
  ConditionNumber wcc;
  RatioEstimates scc;  // SCC_j and SCLP_j; zero when wcc.infinite
  std::optional<double> scc_exact;
};

struct ConditionReport {
  std::size_t m = 0;
  std::size_t n = 0;
  std::size_t k = 0;
  ConditionNumber wnc;
  RatioEstimates snc;  // SNC and SNLP; zero when wnc.infinite
  std::optional<double> snc_exact;
  std::optional<double> snlp_exact;
  std::vector<OutputCondition> outputs;
  std::size_t samples = 0;

  bool any_infinite() const;
};

/// All condition quantities at x. Vanishing outputs are flagged, not fatal;
/// only dimension errors throw.
ConditionReport report(const Problem& p, std::span<const double> x, const EstimatorConfig& cfg);

/// Least-squares slope of log|err(delta)| against log(delta) over the trend
/// points that are not underflow-flagged and have a nonzero error. nullopt
/// with fewer than two usable points.
std::optional<double> convergence_slope(const std::vector<DeltaPoint>& trend, double reference);

}  // namespace condana
