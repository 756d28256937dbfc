#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "condana/verify.hpp"

using namespace condana;

namespace {

MonteCarloSettings small_mc() {
  MonteCarloSettings mc;
  mc.samples = 20000;
  mc.threads = 1;
  return mc;
}

void expect_all_pass(const Checks& checks) {
  ASSERT_FALSE(checks.empty());
  for (const auto& c : checks) {
    EXPECT_TRUE(c.passed) << c.name << " [" << c.instance << "] computed=" << c.computed << " "
                          << to_string(c.relation) << " " << c.bound << " tol=" << c.tolerance;
  }
}

}  // namespace

TEST(MakeCheck, NonStrictRelations) {
  auto c = make_check("x", "", 1.0, Relation::le, 1.0, 0.0);
  EXPECT_TRUE(c.passed);
  EXPECT_EQ(c.slack, 0.0);
  EXPECT_FALSE(c.warning);
  c = make_check("x", "", 1.1, Relation::le, 1.0, 0.05);
  EXPECT_FALSE(c.passed);
  EXPECT_NEAR(c.slack, -0.1, 1e-15);
  c = make_check("x", "", 0.9, Relation::ge, 1.0, 0.2);
  EXPECT_TRUE(c.passed);
}

TEST(MakeCheck, StrictRelationsWarnWhenOnlyWideningHelps) {
  auto c = make_check("x", "", 1.0, Relation::lt, 1.0, 0.0);
  EXPECT_FALSE(c.passed);
  c = make_check("x", "", 1.0, Relation::gt, 1.0, 1e-3);
  EXPECT_TRUE(c.passed);
  EXPECT_TRUE(c.warning);
  c = make_check("x", "", 2.0, Relation::gt, 1.0, 0.0);
  EXPECT_TRUE(c.passed);
  EXPECT_FALSE(c.warning);
  EXPECT_EQ(c.slack, 1.0);
}

TEST(MakeCheck, WithinAndNonFinite) {
  auto c = make_check("x", "", 1.05, Relation::within, 1.0, 0.1);
  EXPECT_TRUE(c.passed);
  EXPECT_NEAR(c.slack, 0.05, 1e-15);
  EXPECT_FALSE(make_check("x", "", 1.2, Relation::within, 1.0, 0.1).passed);
  EXPECT_FALSE(make_check("x", "", NAN, Relation::le, 1.0, 1.0).passed);
  EXPECT_FALSE(make_check("x", "", -INFINITY, Relation::le, 1.0, 0.0).passed);
}

TEST(Checks, ClosedForms) { expect_all_pass(check_closed_forms(200)); }

TEST(Checks, MomentSampling) {
  expect_all_pass(check_moment_sampling({1, 2, 3, 5, 10}, 20000, SampleStream(1), 4.0, 1));
}

TEST(Checks, SingleOutputRatio) {
  expect_all_pass(check_single_output_ratio({1, 2, 3, 6}, small_mc(), SampleStream(2)));
}

TEST(Checks, NormwiseBounds) {
  expect_all_pass(check_normwise_bounds({1, 3, 8}, {1, 2, 9}, 1, small_mc(), SampleStream(3)));
}

TEST(Checks, ComponentwiseBounds) {
  const auto checks = check_componentwise_bounds({1, 2, 7}, 5, small_mc(), SampleStream(4));
  expect_all_pass(checks);
  EXPECT_TRUE(std::any_of(checks.begin(), checks.end(),
                          [](auto& c) { return c.name == "componentwise_bounds.all_ones"; }));
  EXPECT_TRUE(std::any_of(checks.begin(), checks.end(),
                          [](auto& c) { return c.name == "componentwise_bounds.one_hot"; }));
}

TEST(Checks, LogSumShiftAndLowerBound) {
  expect_all_pass(check_log_sum_shift(4));
  expect_all_pass(check_log_sum_lower_bound({2, 5, 15}, {30}, 100000, small_mc(), SampleStream(5)));
}

TEST(Checks, BerryEsseen) {
  const auto checks = check_berry_esseen({1, 2, 12}, 2000);
  expect_all_pass(checks);
  // The m = 1 supremum is attained in the interior, above 0.05.
  EXPECT_NEAR(checks.front().computed, 0.0572067211769905, 1e-6);
}

TEST(Checks, PeakednessAndEntropy) {
  expect_all_pass(check_peakedness({2, 4}, 4, small_mc(), SampleStream(6)));
  expect_all_pass(check_entropy_bounds());
}

TEST(Suite, GroupsFilterAndSummary) {
  SuiteConfig cfg;
  cfg.only = {"single_output_ratio", "log_sum_shift"};
  cfg.m_max = 4;
  cfg.mc = small_mc();
  const auto r = run_suite(cfg);
  EXPECT_TRUE(r.all_passed());
  EXPECT_EQ(r.passed, r.checks.size());
  EXPECT_EQ(r.seed, 42u);
  for (const auto& c : r.checks) {
    EXPECT_TRUE(c.name.starts_with("single_output_ratio") || c.name.starts_with("log_sum_shift"));
  }
  cfg.only = {"unknown"};
  EXPECT_THROW(run_suite(cfg), std::invalid_argument);
}

TEST(Suite, DeterministicAcrossRunsAndThreads) {
  SuiteConfig cfg;
  cfg.only = {"normwise_bounds", "peakedness"};
  cfg.m_max = 4;
  cfg.n_max = 3;
  cfg.trials = 2;
  cfg.mc = small_mc();
  const auto a = run_suite(cfg);
  cfg.mc.threads = 3;
  const auto b = run_suite(cfg);
  ASSERT_EQ(a.checks.size(), b.checks.size());
  for (std::size_t i = 0; i < a.checks.size(); ++i) {
    EXPECT_EQ(a.checks[i].instance, b.checks[i].instance);
    EXPECT_EQ(a.checks[i].computed, b.checks[i].computed);
    EXPECT_EQ(a.checks[i].tolerance, b.checks[i].tolerance);
  }
}

TEST(Suite, SummarizeCounts) {
  Checks cs{make_check("a", "", 1, Relation::le, 2, 0), make_check("b", "", 3, Relation::le, 2, 0),
            make_check("c", "", 1, Relation::gt, 1, 0.5)};
  const auto r = summarize(cs, 7);
  EXPECT_EQ(r.passed, 2u);
  EXPECT_EQ(r.failed, 1u);
  EXPECT_EQ(r.warnings, 1u);
  EXPECT_FALSE(r.all_passed());
}
