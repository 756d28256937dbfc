#pragma once

// Executable checks of the closed forms and bounds relating stochastic and
// worst-case condition numbers. Every check yields BoundCheck records with
// the measured slack; Monte Carlo values are always compared after widening
// by a multiple of their confidence half-width.

#include <cstdint>
#include <string>
#include <vector>

#include "condana/rand_geom.hpp"

namespace condana {

enum class Relation { le, lt, ge, gt, within };

const char* to_string(Relation r);

struct BoundCheck {
  std::string name;
  std::string instance;
  double computed = 0.0;
  double bound = 0.0;
  Relation relation = Relation::le;
  /// Signed distance to the bound; positive means satisfied without widening.
  double slack = 0.0;
  /// Widening (Monte Carlo) or absolute tolerance (exact oracles).
  double tolerance = 0.0;
  bool passed = false;
  /// Strict relation that only holds thanks to the widening.
  bool warning = false;
};

/// Builds a record; `tolerance` widens the relation in the computed value's
/// favour (for `within` it is the allowed |computed - bound|).
BoundCheck make_check(std::string name, std::string instance, double computed, Relation relation,
                      double bound, double tolerance);

struct MonteCarloSettings {
  std::size_t samples = 100000;
  double confidence = 0.99;
  unsigned threads = 0;
  /// Monte Carlo comparisons widen by this many half-widths.
  double widen = 4.0;
};

using Checks = std::vector<BoundCheck>;

/// Wallis and log-cosine recurrences, seeds and quadrature cross-checks;
/// ball and cosine moment identities.
Checks check_closed_forms(unsigned m_max);

/// Empirical ball and angle moments against the closed forms, within
/// `sigmas` standard errors.
Checks check_moment_sampling(const std::vector<unsigned>& m_list, std::size_t samples,
                             const SampleStream& stream, double sigmas = 4.0,
                             unsigned threads = 0);

/// Exact single-output SNC/WNC ratio and bit gap: Monte Carlo on random
/// linear problems, and assembly from the ball and cosine moments.
Checks check_single_output_ratio(const std::vector<unsigned>& m_list, const MonteCarloSettings& mc,
                                 const SampleStream& stream);

/// Norm-wise ratio and SNLP-gap bounds on random linear problems for every
/// (m, n) pair.
Checks check_normwise_bounds(const std::vector<unsigned>& m_list,
                             const std::vector<unsigned>& n_list, unsigned trials,
                             const MonteCarloSettings& mc, const SampleStream& stream);

/// Componentwise ratio and SCLP-gap bounds for random weight vectors g, plus
/// one-hot and all-ones patterns; m = 1 is checked against the exact 1/2.
Checks check_componentwise_bounds(const std::vector<unsigned>& m_list, unsigned trials,
                                  const MonteCarloSettings& mc, const SampleStream& stream);

/// E ln|u_1 + ... + u_{m+1}| = E((u_1 + ... + u_m + 1) ln|...|) - 1 for
/// m + 1 = 1 ... max_terms, and the closed form of the integral of ln|a + u|.
Checks check_log_sum_shift(unsigned max_terms);

/// E ln|u_1 + ... + u_{m+1}| > ln(m)/2 - ln(3)/2 - 1 - eps_{m+1}: quadrature
/// for `quadrature_m`, Monte Carlo for `monte_carlo_m`.
Checks check_log_sum_lower_bound(const std::vector<unsigned>& quadrature_m,
                                 const std::vector<unsigned>& monte_carlo_m,
                                 std::size_t monte_carlo_samples, const MonteCarloSettings& mc,
                                 const SampleStream& stream);

/// sup_a |P(W <= a) - Phi(a)| <= 1/sqrt(m) for the standardised uniform sum W,
/// over `grid_points` points spanning [-sqrt(3m) - 1, sqrt(3m) + 1].
Checks check_berry_esseen(const std::vector<unsigned>& m_list, std::size_t grid_points = 10000);

/// P(|a^T u| > b) >= P(|u_1 + ... + u_m| > b) whenever |a|_1 = m.
Checks check_peakedness(const std::vector<unsigned>& m_list, unsigned trials,
                        const MonteCarloSettings& mc, const SampleStream& stream);

/// Lower bound on E[(W + delta) ln|W + delta|] and positivity of the
/// Gaussian-tail log functional, on fixed grids.
Checks check_entropy_bounds();

struct SuiteConfig {
  std::uint64_t seed = 42;
  MonteCarloSettings mc;
  /// Restrict to these group names (empty: all).
  std::vector<std::string> only;
  /// Inclusive filters applied to every group's dimension list.
  unsigned m_min = 1;
  unsigned m_max = 1000;
  unsigned n_min = 1;
  unsigned n_max = 1000;
  /// Overrides the per-group default trial counts when nonzero.
  unsigned trials = 0;
};

/// Group names in declared (stream) order.
const std::vector<std::string>& suite_groups();

struct VerifySuiteReport {
  std::vector<BoundCheck> checks;
  std::size_t passed = 0;
  std::size_t failed = 0;
  std::size_t warnings = 0;
  std::uint64_t seed = 0;

  bool all_passed() const { return failed == 0; }
};

/// Runs the selected groups; group i draws from SampleStream(seed).substream(i).
VerifySuiteReport run_suite(const SuiteConfig& cfg);

VerifySuiteReport summarize(std::vector<BoundCheck> checks, std::uint64_t seed);

}  // namespace condana
