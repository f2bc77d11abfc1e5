// Copyright 2026 The csgopt Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "csgopt/line_search.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include <gtest/gtest.h>

#include "csgopt/error.hpp"

namespace csgopt {
namespace {

Vector scalar(double v) { return Vector::Constant(1, v); }

const FeasibleSet& wide_line() {
  static const FeasibleSet set = FeasibleSet::cube(1, -1e30, 1e30);
  return set;
}

TEST(SufficientDecrease, ZeroStepMeetsMemoryMax) {
  const std::vector<double> memory{0.3, 0.7};
  EXPECT_TRUE(check_sw1_star(0.7, memory, scalar(1.0), scalar(0.2), scalar(0.2), 1e-4));
}

TEST(SufficientDecrease, StrictPerturbationAroundThreshold) {
  const std::vector<double> memory{0.4, 1.0};
  const double c1 = 0.1;
  const Vector g = scalar(2.0), u = scalar(1.0), s = scalar(0.5);
  const double threshold = 1.0 - c1 * 2.0 * 0.5;
  EXPECT_TRUE(check_sw1_star(threshold - 0.1, memory, g, u, s, c1));
  EXPECT_FALSE(check_sw1_star(threshold + 0.1, memory, g, u, s, c1));
}

TEST(SufficientDecrease, WorkedExample) {
  // Threshold 0.5 - 0.25 * 1 * (1 - 0) = 0.25.
  const std::vector<double> memory{0.5};
  EXPECT_TRUE(check_sw1_star(0.2, memory, scalar(1.0), scalar(1.0), scalar(0.0), 0.25));
  EXPECT_FALSE(check_sw1_star(0.3, memory, scalar(1.0), scalar(1.0), scalar(0.0), 0.25));
}

TEST(SufficientDecrease, EmptyMemoryIsRejected) {
  EXPECT_THROW(check_sw1_star(0.0, {}, scalar(1.0), scalar(0.0), scalar(0.0), 0.1), InvalidInput);
}

TEST(Curvature, Examples) {
  EXPECT_TRUE(check_sw2(scalar(5.0), scalar(2.0), scalar(1.0), scalar(1.0), 0.9));
  // LHS -0.5 >= RHS -1.8.
  EXPECT_TRUE(check_sw2(scalar(0.5), scalar(2.0), scalar(1.0), scalar(0.0), 0.9));
  // LHS -2 < RHS -1.8.
  EXPECT_FALSE(check_sw2(scalar(2.0), scalar(2.0), scalar(1.0), scalar(0.0), 0.9));
}

TEST(Curvature, DimensionMismatchIsRejected) {
  EXPECT_THROW(check_sw2(Vector::Zero(2), scalar(1.0), scalar(0.0), scalar(0.0), 0.9),
               InvalidInput);
}

TEST(LineSearchConfig, Validation) {
  LineSearchConfig cfg;
  EXPECT_NO_THROW(cfg.validate());
  cfg.c1 = 0.95;
  EXPECT_THROW(cfg.validate(), InvalidInput);
  cfg = LineSearchConfig{};
  cfg.max_trials = 0;
  EXPECT_THROW(cfg.validate(), InvalidInput);
  cfg = LineSearchConfig{};
  cfg.memory = -1;
  EXPECT_THROW(cfg.validate(), InvalidInput);
}

// Stub estimators with hard-wired outcomes. With g_hat = 1 at u = 0 the
// direction is -1; memory {0} and c1 small make any j_trial <= -1 pass SW1*
// and any j_trial >= 1 fail it.

TrialEstimator always_fail_sw1() {
  return [](const Vector& s) { return AggregateEstimate{1.0, Vector::Constant(s.size(), 1.0)}; };
}

TrialEstimator accept_everything() {
  // Zero trial gradient: g_trial . d = 0 >= c2 * g_hat . d (negative).
  return [](const Vector& s) { return AggregateEstimate{-1.0, Vector::Zero(s.size())}; };
}

TrialEstimator fail_sw2_only() {
  // Trial gradient equal to g_hat: g . d < c2 g . d for every nonzero step.
  return [](const Vector& s) { return AggregateEstimate{-1.0, Vector::Constant(s.size(), 1.0)}; };
}

TEST(Backtracking, AllSufficientDecreaseFailuresHalveToTwoToMinusT) {
  LineSearchConfig cfg;
  const std::vector<double> memory{0.0};
  for (int T : {1, 5, 30, 40}) {
    cfg.max_trials = T;
    for (double eta0 : {1.0, 0.025, 3.7}) {
      const auto r = backtracking_refine(always_fail_sw1(), scalar(0.0), scalar(1.0), memory,
                                         eta0, cfg, wide_line());
      EXPECT_EQ(r.tau, std::ldexp(eta0, -T));
      EXPECT_EQ(r.refinements, T);
      EXPECT_EQ(r.exit, LineSearchExit::kExhausted);
    }
  }
}

TEST(Backtracking, ImmediateAcceptReturnsEta0) {
  const std::vector<double> memory{0.0};
  const auto r = backtracking_refine(accept_everything(), scalar(0.0), scalar(1.0), memory, 0.3,
                                     LineSearchConfig{}, wide_line());
  EXPECT_EQ(r.tau, 0.3);
  EXPECT_EQ(r.refinements, 1);
  EXPECT_EQ(r.exit, LineSearchExit::kAccepted);
}

TEST(Backtracking, PersistentCurvatureFailureReturnsLastLowerBracket) {
  LineSearchConfig cfg;
  cfg.max_trials = 12;
  const std::vector<double> memory{0.0};
  const double eta0 = 0.125;
  const auto r = backtracking_refine(fail_sw2_only(), scalar(0.0), scalar(1.0), memory, eta0, cfg,
                                     wide_line());
  EXPECT_EQ(r.exit, LineSearchExit::kLastCurvature);
  EXPECT_EQ(r.refinements, 12);
  EXPECT_EQ(r.tau, std::ldexp(eta0, 11));
  EXPECT_EQ(r.tau, r.trials.back().eta_a);
  const Vector s = wide_line().project(scalar(0.0) - r.tau * scalar(1.0));
  EXPECT_TRUE(check_sw1_star(fail_sw2_only()(s).j_hat, memory, scalar(1.0), scalar(0.0), s,
                             cfg.c1));
}

TEST(Backtracking, BracketIsMonotone) {
  // Alternating outcomes driven by the trial step: SW1* fails beyond 0.7,
  // SW2 fails below it.
  const TrialEstimator estimator = [](const Vector& s) {
    const double step = -s[0];
    return AggregateEstimate{step > 0.7 ? 1.0 : -1.0, Vector::Constant(1, 1.0)};
  };
  LineSearchConfig cfg;
  cfg.max_trials = 25;
  const std::vector<double> memory{0.0};
  const auto r = backtracking_refine(estimator, scalar(0.0), scalar(1.0), memory, 0.01, cfg,
                                     wide_line());
  double a = 0.0;
  double b = std::numeric_limits<double>::infinity();
  for (const auto& st : r.trials) {
    EXPECT_GE(st.eta, a);
    if (std::isfinite(b)) EXPECT_LE(st.eta, b);
    EXPECT_GE(st.a, a);
    EXPECT_LE(st.b, b);
    a = st.a;
    b = st.b;
    if (std::isfinite(b)) EXPECT_LT(a, b);
  }
  EXPECT_NEAR(r.tau, 0.7, 1e-5);
  EXPECT_LE(r.refinements, cfg.max_trials);
}

TEST(Backtracking, CurvatureIgnoredWhenProjectionActive) {
  // Every trial leaves the box, so SW1* alone decides acceptance.
  const auto box = FeasibleSet::cube(1, -0.01, 0.01);
  const std::vector<double> memory{0.0};
  const auto r = backtracking_refine(fail_sw2_only(), scalar(0.0), scalar(1.0), memory, 1.0,
                                     LineSearchConfig{}, box);
  EXPECT_EQ(r.exit, LineSearchExit::kAccepted);
  EXPECT_EQ(r.refinements, 1);
  EXPECT_FALSE(r.trials.front().projection_inactive);
  EXPECT_FALSE(r.trials.front().sw2);
}

TEST(Backtracking, HistoryOverloadUsesEmpiricalEstimates) {
  SampleHistory h(1, 1);
  h.append(scalar(0.0), scalar(0.0), 1.0, scalar(1.0));
  const std::vector<double> memory{1.0};
  // One record: every trial sees j = 1, g = 1, so SW1* fails for any step.
  const auto r = backtracking_refine(HistoryView(h), scalar(0.0), scalar(1.0), memory, 0.5,
                                     LineSearchConfig{}, wide_line());
  EXPECT_EQ(r.tau, std::ldexp(0.5, -LineSearchConfig{}.max_trials));
}

TEST(Backtracking, NonFiniteTrialIsAnEvaluationError) {
  const TrialEstimator nan_estimator = [](const Vector& s) {
    return AggregateEstimate{std::nan(""), Vector::Zero(s.size())};
  };
  const std::vector<double> memory{0.0};
  EXPECT_THROW(backtracking_refine(nan_estimator, scalar(0.0), scalar(1.0), memory, 1.0,
                                   LineSearchConfig{}, wide_line()),
               EvaluationError);
}

TEST(Backtracking, RejectsBadArguments) {
  const std::vector<double> memory{0.0};
  EXPECT_THROW(backtracking_refine(accept_everything(), scalar(0.0), scalar(1.0), memory, 0.0,
                                   LineSearchConfig{}, wide_line()),
               InvalidInput);
  EXPECT_THROW(backtracking_refine(accept_everything(), scalar(0.0), scalar(1.0), {}, 1.0,
                                   LineSearchConfig{}, wide_line()),
               InvalidInput);
}

TEST(Schedules, Examples) {
  EXPECT_EQ(schedule_value(ConstantStep{1.9}, 7), 1.9);
  for (std::size_t n : {1u, 10u, 1000u}) EXPECT_EQ(schedule_value(PowerDecayStep{1.0, 0.0}, n), 1.0);
  EXPECT_DOUBLE_EQ(schedule_value(PowerDecayStep{0.1, 0.5}, 100), 0.01);
  EXPECT_DOUBLE_EQ(schedule_value(PowerDecayStep{2.0, 1.0}, 8), 0.25);
}

TEST(Schedules, IndexZeroAndBadParametersAreRejected) {
  EXPECT_THROW(schedule_value(ConstantStep{1.0}, 0), InvalidInput);
  EXPECT_THROW(validate(StepSchedule{PowerDecayStep{0.0, 0.5}}), InvalidInput);
  EXPECT_THROW(validate(StepSchedule{PowerDecayStep{1.0, 1.5}}), InvalidInput);
  EXPECT_THROW(validate(StepSchedule{ConstantStep{-1.0}}), InvalidInput);
  EXPECT_NO_THROW(validate(StepSchedule{ConstantStep{0.0}}));
}

TEST(Lipschitz, FirstCallReturnsUpperBound) {
  LipschitzEstimator est(1e-8, 1e8);
  EXPECT_EQ(est.update(scalar(0.0), scalar(0.0)), 1e8);
}

TEST(Lipschitz, ClampExamples) {
  LipschitzEstimator upper(1e-8, 1e8);
  upper.update(scalar(0.0), scalar(0.0));
  EXPECT_EQ(upper.update(scalar(1e-6), scalar(1e6)), 1e8);

  LipschitzEstimator interior(1e-8, 1e8);
  interior.update(scalar(0.0), scalar(0.0));
  EXPECT_EQ(interior.update(scalar(1.0), scalar(2.0)), 2.0);

  LipschitzEstimator lower(1e-8, 1e8);
  lower.update(scalar(0.0), scalar(3.0));
  EXPECT_EQ(lower.update(scalar(1.0), scalar(3.0)), 1e-8);
}

TEST(Lipschitz, TinyDisplacementKeepsPreviousEstimate) {
  LipschitzEstimator est(1e-8, 1e8);
  est.update(scalar(0.0), scalar(0.0));
  EXPECT_EQ(est.update(scalar(1.0), scalar(2.0)), 2.0);
  EXPECT_EQ(est.update(scalar(1.0), scalar(50.0)), 2.0);
  // The stored pair moved on, so the next quotient uses g = 50.
  EXPECT_EQ(est.update(scalar(2.0), scalar(54.0)), 4.0);
}

TEST(Lipschitz, OutputStaysWithinBounds) {
  LipschitzEstimator est(0.5, 2.0);
  Vector u = scalar(0.0);
  for (int k = 1; k < 50; ++k) {
    const double c = est.update(u, scalar(std::sin(k) * k));
    EXPECT_GE(c, 0.5);
    EXPECT_LE(c, 2.0);
    u[0] += 0.1 * k;
  }
}

TEST(Lipschitz, RejectsBadBounds) {
  EXPECT_THROW(LipschitzEstimator(0.0, 1.0), InvalidInput);
  EXPECT_THROW(LipschitzEstimator(2.0, 1.0), InvalidInput);
}

}  // namespace
}  // namespace csgopt
