#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <cmath>
#include <numbers>

#include "condana/closed_forms.hpp"
#include "condana/condition.hpp"
#include "condana/errors.hpp"

using namespace condana;

namespace {

constexpr double kPi = std::numbers::pi;

EstimatorConfig config(std::size_t samples = 100000, std::uint64_t seed = 42) {
  EstimatorConfig c;
  c.samples = samples;
  c.stream = SampleStream(seed);
  c.threads = 1;
  return c;
}

double svd_norm(const Matrix& a) {
  Eigen::MatrixXd e(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) e(i, j) = a(i, j);
  return Eigen::JacobiSVD<Eigen::MatrixXd>(e).singularValues()(0);
}

}  // namespace

TEST(SpectralNorm, Examples) {
  EXPECT_DOUBLE_EQ(spectral_norm(Matrix::identity(3)), 1.0);
  EXPECT_DOUBLE_EQ(spectral_norm(Matrix{{2.0, 0.0}, {0.0, 1.0}}), 2.0);
  EXPECT_DOUBLE_EQ(spectral_norm(Matrix{{5.0, 2.0}}), std::sqrt(29.0));
  EXPECT_DOUBLE_EQ(spectral_norm(Matrix{{3.0}, {4.0}}), 5.0);
  EXPECT_EQ(spectral_norm(Matrix(3, 4, 0.0)), 0.0);
}

TEST(SpectralNorm, MatchesSvdOnRandomMatrices) {
  SampleStream s(8);
  for (int t = 0; t < 60; ++t) {
    const std::size_t n = 1 + s.next_u64() % 12, m = 1 + s.next_u64() % 12;
    Matrix a(n, m);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < m; ++j) a(i, j) = s.normal();
    const double ref = svd_norm(a);
    EXPECT_NEAR(spectral_norm(a), ref, 1e-10 * ref) << n << "x" << m;
  }
}

TEST(SpectralNorm, RejectsNonFinite) {
  EXPECT_THROW(spectral_norm(Matrix{{1.0, NAN}, {0.0, 1.0}}), NonFiniteError);
}

TEST(Wnc, Examples) {
  EXPECT_NEAR(wnc(make_problem("identity"), Vector{0.3, -7.0}).value, 1.0, 1e-15);
  EXPECT_NEAR(wnc(make_problem("product"), Vector{1.0, 1.0}).value, 2.0, 1e-15);
  const auto diag = linear_problem("diag", Matrix{{2.0, 0.0}, {0.0, 1.0}});
  EXPECT_NEAR(wnc(diag, Vector{1.0, 0.0}).value, 1.0, 1e-15);
  EXPECT_TRUE(wnc(make_problem("sum"), Vector{1.0, -1.0}).infinite);
}

TEST(Wcc, Examples) {
  const auto prod = make_problem("product");
  EXPECT_NEAR(wcc(prod, Vector{1.0, 1.0}, 0).value, 2.0, 1e-15);
  EXPECT_NEAR(wcc(prod, Vector{-3.0, 0.25}, 0).value, 2.0, 1e-15);
  EXPECT_NEAR(wcc(make_problem("sum"), Vector{1.0, 1.0}, 0).value, 1.0, 1e-15);
  EXPECT_TRUE(wcc(make_problem("sum"), Vector{1.0, -1.0}, 0).infinite);
  EXPECT_THROW(wcc(prod, Vector{1.0, 1.0}, 1), DimensionError);
}

TEST(Snc, ProductExactValue) {
  const auto r = snc(make_problem("product"), Vector{1.0, 1.0}, config());
  ASSERT_TRUE(r.exact.has_value());
  EXPECT_NEAR(*r.exact, 8.0 / (3.0 * kPi), 1e-14);
  EXPECT_NEAR(r.estimate.value.mean, *r.exact, 4 * r.estimate.value.half_width);
  ASSERT_TRUE(r.exact_snlp.has_value());
  EXPECT_NEAR(r.estimate.log2.mean, *r.exact_snlp, 4 * r.estimate.log2.half_width);
}

TEST(Snc, MonteCarloMatchesExactForSingleOutputCorpus) {
  SampleStream points(5);
  for (const auto& d : list_problems()) {
    const auto p = make_problem(d.name);
    if (p.n != 1) continue;
    for (int k = 0; k < 10; ++k) {
      Vector x(p.m);
      for (auto& v : x) v = 0.5 + points.uniform01();
      const auto r = snc(p, x, config(100000, 100 + k));
      ASSERT_TRUE(r.exact);
      EXPECT_NEAR(r.estimate.value.mean, *r.exact, 4 * r.estimate.value.half_width) << d.name;
    }
  }
}

TEST(Snc, IdentityWithinNormwiseBounds) {
  for (std::size_t m : {2u, 3u, 6u}) {
    const auto p = make_problem("identity", m);
    Vector x(m, 1.0);
    x[0] = 2.0;
    const auto r = snc(p, x, config(20000));
    const auto b = normwise_bounds(m, m);
    const double ratio = r.estimate.value.mean / wnc(p, x).value;
    EXPECT_TRUE(b.ratio.contains(ratio, 4 * r.estimate.value.half_width)) << m;
  }
}

TEST(Snc, ScaleInvariance) {
  const Vector x{1.0, -2.0, 0.5};
  const auto base = snc(make_problem("identity", 3), x, config(5000));
  const auto scaled = snc(make_problem("scale", 3), x, config(5000));
  EXPECT_NEAR(scaled.estimate.value.mean, base.estimate.value.mean,
              1e-12 * base.estimate.value.mean);
  EXPECT_NEAR(scaled.estimate.log2.mean, base.estimate.log2.mean, 1e-12);

  // A power-of-two factor scales every intermediate exactly.
  const auto p4 = linear_problem("x4", Matrix{{4.0, 0.0, 0.0}, {0.0, 4.0, 0.0}, {0.0, 0.0, 4.0}});
  const auto four = snc(p4, x, config(5000));
  EXPECT_EQ(four.estimate.value.mean, base.estimate.value.mean);
  EXPECT_EQ(wnc(p4, x).value, wnc(make_problem("identity", 3), x).value);
}

TEST(Snc, DegenerateOutputThrows) {
  EXPECT_THROW(snc(make_problem("sum"), Vector{1.0, -1.0}, config(1000)), DegenerateOutputError);
}

TEST(Snc, ThreadCountDoesNotChangeResult) {
  auto cfg = config(30000);
  const auto one = snc(make_problem("matvec"), Vector{1.0, 1.0, 2.0}, cfg);
  cfg.threads = 4;
  const auto four = snc(make_problem("matvec"), Vector{1.0, 1.0, 2.0}, cfg);
  EXPECT_EQ(one.estimate.value.mean, four.estimate.value.mean);
  EXPECT_EQ(one.estimate.log2.mean, four.estimate.log2.mean);
  EXPECT_EQ(one.estimate.value.half_width, four.estimate.value.half_width);
}

TEST(ExactProjection, KnownValues) {
  EXPECT_NEAR(*exact_mean_abs_projection(Vector{1.0}), 0.5, 1e-16);
  EXPECT_NEAR(*exact_mean_abs_projection(Vector{1.0, 1.0}), 2.0 / 3.0, 1e-15);
  EXPECT_NEAR(*exact_mean_abs_projection(Vector{1.0, 0.5}), 13.0 / 24.0, 1e-15);
  EXPECT_NEAR(*exact_mean_abs_projection(Vector{1.0, 1.0, 1.0}), 13.0 / 16.0, 1e-15);
  EXPECT_NEAR(*exact_mean_abs_projection(Vector{1.0, -2.0, 3.0}), 16.0 / 9.0, 1e-14);
  EXPECT_NEAR(*exact_mean_abs_projection(Vector{0.0, -3.0, 0.0}), 1.5, 1e-15);
  EXPECT_FALSE(exact_mean_abs_projection(Vector{1.0, 1.0, 1.0, 1.0}));
  EXPECT_FALSE(exact_mean_abs_projection(Vector{1.0, 1e-6}));
}

TEST(Scc, ExamplesAndExactPath) {
  // dot problem: g = (1, -2, 3), f = 2, WCC = 3.
  const auto dot = make_problem("dot");
  const Vector x{1.0, 1.0, 1.0};
  const auto r = scc(dot, x, 0, config());
  ASSERT_TRUE(r.exact);
  EXPECT_NEAR(*r.exact / wcc(dot, x, 0).value, 8.0 / 27.0, 1e-14);
  EXPECT_NEAR(r.estimate.value.mean, *r.exact, 4 * r.estimate.value.half_width);

  const auto sum = make_problem("sum");
  const auto s = scc(sum, Vector{1.0, 1.0}, 0, config());
  EXPECT_NEAR(*s.exact / wcc(sum, Vector{1.0, 1.0}, 0).value, 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(s.estimate.value.mean, 1.0 / 3.0, 4 * s.estimate.value.half_width);

  // A single active coordinate: SCC = WCC / 2.
  const auto lone = linear_problem("lone", Matrix{{0.0, 5.0, 0.0}});
  const auto l = scc(lone, Vector{1.0, 2.0, 3.0}, 0, config());
  EXPECT_NEAR(*l.exact, 0.5, 1e-15);
}

TEST(Scc, BelowHalfWcc) {
  SampleStream s(31);
  for (int t = 0; t < 10; ++t) {
    const std::size_t m = 2 + t;
    Matrix a(1, m);
    Vector x(m);
    for (std::size_t i = 0; i < m; ++i) {
      a(0, i) = s.normal();
      x[i] = s.uniform_symmetric();
    }
    const auto p = linear_problem("row", a);
    const auto w = wcc(p, x, 0);
    const auto r = scc(p, x, 0, config(20000, t));
    EXPECT_LE(r.estimate.value.mean, w.value / 2 + 4 * r.estimate.value.half_width);
    EXPECT_LE(r.estimate.log2.mean, std::log2(w.value) - 1 + 4 * r.estimate.log2.half_width);
  }
}

TEST(FiniteDelta, LinearProblemMatchesLinearized) {
  const auto p = make_problem("matvec");
  const Vector x{1.0, 1.0, 2.0};
  auto lin = config(5000);
  auto fd = lin;
  fd.mode = EstimatorMode::finite_delta;
  fd.deltas = {1e-1, 1e-2, 1e-3};
  const auto a = snc(p, x, lin);
  const auto b = snc(p, x, fd);
  ASSERT_EQ(b.trend.size(), 3u);
  for (const auto& pt : b.trend) {
    EXPECT_FALSE(pt.underflow);
    EXPECT_NEAR(pt.estimate.value.mean, a.estimate.value.mean, 1e-12 * a.estimate.value.mean);
  }
  const auto c = scc(p, x, 2, lin);
  const auto d = scc(p, x, 2, fd);
  for (const auto& pt : d.trend)
    EXPECT_NEAR(pt.estimate.value.mean, c.estimate.value.mean, 1e-12 * c.estimate.value.mean);
}

TEST(FiniteDelta, ConvergesAtFirstOrder) {
  const auto p = make_problem("product");
  const Vector x{1.0, 1.0};
  auto lin = config(20000);
  auto fd = lin;
  fd.mode = EstimatorMode::finite_delta;
  fd.deltas = {1e-2, 1e-3, 1e-4, 1e-5, 1e-6, 1e-7};
  const auto a = snc(p, x, lin);
  const auto b = snc(p, x, fd);
  const auto slope = convergence_slope(b.trend, a.estimate.value.mean);
  ASSERT_TRUE(slope);
  EXPECT_NEAR(*slope, 1.0, 0.2);
  const auto c = scc(p, x, 0, lin);
  const auto d = scc(p, x, 0, fd);
  const auto cs = convergence_slope(d.trend, c.estimate.value.mean);
  ASSERT_TRUE(cs);
  EXPECT_NEAR(*cs, 1.0, 0.2);
}

TEST(FiniteDelta, TinyDeltaFlagsUnderflow) {
  auto fd = config(1000);
  fd.mode = EstimatorMode::finite_delta;
  fd.deltas = {1e-1, 1e-300};
  const auto r = snc(make_problem("product"), Vector{1.0, 1.0}, fd);
  EXPECT_FALSE(r.trend[0].underflow);
  EXPECT_TRUE(r.trend[1].underflow);
}

TEST(EstimatorConfig, Validation) {
  auto c = config(99);
  EXPECT_THROW(c.validate(), DomainError);
  c = config(1000);
  c.mode = EstimatorMode::finite_delta;
  EXPECT_THROW(c.validate(), DomainError);
  c.deltas = {1e-2, 1e-1};
  EXPECT_THROW(c.validate(), DomainError);
  c.deltas = {1e-1, 1e-2};
  EXPECT_NO_THROW(c.validate());
}

TEST(Report, Examples) {
  const auto id = report(make_problem("identity"), Vector{1.0, 1.0}, config(2000));
  EXPECT_NEAR(id.wnc.value, 1.0, 1e-15);
  ASSERT_EQ(id.outputs.size(), 2u);
  EXPECT_NEAR(id.outputs[0].wcc.value, 1.0, 1e-15);
  EXPECT_NEAR(id.outputs[1].wcc.value, 1.0, 1e-15);
  EXPECT_FALSE(id.snc_exact);

  const auto pr = report(make_problem("product"), Vector{1.0, 1.0}, config(2000));
  EXPECT_NEAR(pr.wnc.value, 2.0, 1e-15);
  EXPECT_NEAR(pr.outputs[0].wcc.value, 2.0, 1e-15);
  EXPECT_NEAR(*pr.snc_exact, 8.0 / (3.0 * kPi), 1e-14);
  EXPECT_FALSE(pr.any_infinite());

  const auto su = report(make_problem("sum"), Vector{1.0, -1.0}, config(2000));
  EXPECT_TRUE(su.wnc.infinite);
  EXPECT_TRUE(su.outputs[0].wcc.infinite);
  EXPECT_TRUE(su.any_infinite());

  EXPECT_THROW(report(make_problem("sum"), Vector{1.0}, config(2000)), DimensionError);
}

TEST(Report, WorstCaseDominatesStochastic) {
  const auto r = report(make_problem("horner"), Vector{1.0, -2.0, 0.5, 1.0, 1.5}, config(20000));
  EXPECT_LE(r.snc.value.mean, r.wnc.value * (1 + 4 * r.snc.value.half_width));
  EXPECT_LE(r.outputs[0].scc.value.mean,
            r.outputs[0].wcc.value / 2 + 4 * r.outputs[0].scc.value.half_width);
}
