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
#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "csgopt/error.hpp"
#include "csgopt/testbed.hpp"

namespace csgopt {
namespace {

Vector vec(std::initializer_list<double> values) {
  Vector v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (double x : values) v(i++) = x;
  return v;
}

double classic_rosenbrock(double a, double b) {
  return (1 - a) * (1 - a) + 100 * (b - a * a) * (b - a * a);
}

TEST(MakeProblem, KnownNamesAndDimensions) {
  EXPECT_EQ(make_problem("quadratic")->dim_design(), 1);
  EXPECT_EQ(make_problem("bump")->dim_param(), 5);
  auto rosen = make_problem("rosenbrock");
  EXPECT_EQ(rosen->dim_design(), 2);
  EXPECT_EQ(rosen->dim_param(), 1);
  EXPECT_THROW(make_problem("himmelblau"), InvalidInput);
}

TEST(Quadratic, IntegrandAndClosedForms) {
  QuadraticProblem1D p;
  EXPECT_DOUBLE_EQ(p.eval_integrand(vec({0.25}), vec({-0.25})), 0.125);
  EXPECT_DOUBLE_EQ(p.eval_integrand_grad(vec({0.25}), vec({-0.25}))(0), 0.5);
  EXPECT_DOUBLE_EQ(*p.true_objective(vec({0.0})), 1.0 / 24.0);
  EXPECT_DOUBLE_EQ((*p.true_gradient(vec({-0.3})))(0), -0.3);
  EXPECT_EQ(*p.known_lipschitz(), 1.0);
}

TEST(Quadratic, TwoNodeRuleIsAlreadyExact) {
  // (u - x)^2 has degree 2 in x, within reach of any rule with m >= 2.
  QuadraticProblem1D p;
  for (int m : {2, 3, 7, 40}) {
    const QuadratureResult q = quadrature_oracle(p, vec({0.3}), m);
    EXPECT_NEAR(q.value, 0.045 + 1.0 / 24.0, 1e-15) << m;
    EXPECT_NEAR(q.gradient(0), 0.3, 1e-15) << m;
  }
}

TEST(Rosenbrock, ZeroNoiseIsTheClassicFunction) {
  NoisyRosenbrock p;
  EXPECT_DOUBLE_EQ(p.eval_integrand(vec({1.0, 1.0}), vec({0.0})), 0.0);
  EXPECT_NEAR(p.eval_integrand(vec({-1.2, 1.0}), vec({0.0})), 24.2, 1e-12);
  EXPECT_DOUBLE_EQ(p.eval_integrand(vec({0.5, -2.0}), vec({0.0})), classic_rosenbrock(0.5, -2.0));
  EXPECT_DOUBLE_EQ(p.eval_integrand(vec({0.5, -2.0}), vec({1.0})),
                   2.0 * classic_rosenbrock(0.5, -2.0));
  EXPECT_EQ(*p.known_minimizer(), vec({1.0, 1.0}));
}

TEST(Rosenbrock, QuadratureMatchesClosedFormAtRandomPoints) {
  NoisyRosenbrock p;
  std::mt19937_64 gen(2024);
  std::uniform_real_distribution<double> coord(-3.0, 3.0);
  for (int trial = 0; trial < 20; ++trial) {
    const Vector u = vec({coord(gen), coord(gen)});
    const QuadratureResult q = quadrature_oracle(p, u, 80);
    const double exact = classic_rosenbrock(u(0), u(1));
    EXPECT_NEAR(q.value, exact, 1e-10 * (1 + exact));
    const Vector g = *p.true_gradient(u);
    EXPECT_LT((q.gradient - g).norm(), 1e-10 * (1 + g.norm()));
  }
}

TEST(Quadratic, QuadratureMatchesClosedFormAtRandomPoints) {
  QuadraticProblem1D p;
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> coord(-0.5, 0.5);
  for (int trial = 0; trial < 20; ++trial) {
    const Vector u = vec({coord(gen)});
    const QuadratureResult q = quadrature_oracle(p, u, 3);
    EXPECT_NEAR(q.value, *p.true_objective(u), 1e-14);
    EXPECT_NEAR(q.gradient(0), (*p.true_gradient(u))(0), 1e-12);
  }
}

TEST(Bump, QuadratureAgreesWithIndependentMonteCarlo) {
  BumpProblem5D p;
  const Vector u = vec({0.5, -0.2, 0.0, 1.0, 0.3});
  const QuadratureResult q = quadrature_oracle(p, u, 12);

  std::mt19937_64 gen(99);
  std::uniform_real_distribution<double> coord(-1.0, 1.0);
  const int draws = 400000;
  double sum = 0.0, sum_sq = 0.0;
  for (int k = 0; k < draws; ++k) {
    double d2 = 0.0;
    for (int i = 0; i < 5; ++i) {
      const double d = u(i) - coord(gen);
      d2 += d * d;
    }
    const double v = -20.0 / (1.0 + d2);
    sum += v;
    sum_sq += v * v;
  }
  const double mean = sum / draws;
  const double se = std::sqrt((sum_sq / draws - mean * mean) / draws);
  EXPECT_NEAR(q.value, mean, 4.0 * se);
}

TEST(Bump, QuadratureConvergesAndIsSymmetric) {
  BumpProblem5D p;
  const Vector u = vec({0.4, 0.1, -0.3, 0.0, 0.2});
  const QuadratureResult coarse = quadrature_oracle(p, u, 9);
  const QuadratureResult fine = quadrature_oracle(p, u, 14);
  EXPECT_LT(std::abs(coarse.value - fine.value), 1e-6);
  EXPECT_LT((coarse.gradient - fine.gradient).norm(), 1e-6);

  const QuadratureResult mirrored = quadrature_oracle(p, -u, 9);
  EXPECT_NEAR(mirrored.value, coarse.value, 1e-12);
  EXPECT_LT((mirrored.gradient + coarse.gradient).norm(), 1e-12);

  const QuadratureResult origin = quadrature_oracle(p, Vector::Zero(5), 9);
  EXPECT_LT(origin.gradient.norm(), 1e-12);
  EXPECT_LT(origin.value, coarse.value);
}

TEST(FiniteDifference, AllProblemsAgreeWithAnalyticGradients) {
  QuadraticProblem1D quad;
  EXPECT_LT(finite_difference_check(quad, vec({0.1}), vec({-0.4}), 1e-4), 1e-9);

  NoisyRosenbrock rosen;
  EXPECT_LT(finite_difference_check(rosen, vec({-1.2, 1.0}), vec({0.7}), 1e-5), 1e-6);
  EXPECT_LT(finite_difference_check(rosen, vec({2.0, -1.5}), vec({-0.3}), 1e-5), 1e-6);

  BumpProblem5D bump;
  EXPECT_LT(finite_difference_check(bump, vec({0.3, -0.1, 2.0, 0.0, -1.0}),
                                    vec({0.1, 0.2, -0.9, 0.5, 0.0}), 1e-5),
            1e-6);
}

TEST(FiniteDifference, ZeroGradientUsesAbsoluteError) {
  QuadraticProblem1D quad;
  EXPECT_LT(finite_difference_check(quad, vec({0.2}), vec({0.2}), 1e-3), 1e-12);
}

TEST(FiniteDifference, RejectsBadArguments) {
  QuadraticProblem1D quad;
  EXPECT_THROW(finite_difference_check(quad, vec({0.1}), vec({0.0}), 0.0), InvalidInput);
  EXPECT_THROW(finite_difference_check(quad, vec({0.49}), vec({0.0}), 0.05), InvalidInput);
  EXPECT_THROW(finite_difference_check(quad, vec({0.1}), vec({0.0, 1.0}), 1e-4), InvalidInput);
  EXPECT_THROW(finite_difference_check(quad, vec({0.1, 0.0}), vec({0.0}), 1e-4), InvalidInput);
}

TEST(Quadrature, RejectsBadArguments) {
  QuadraticProblem1D quad;
  EXPECT_THROW(quadrature_oracle(quad, vec({0.1}), 1), InvalidInput);
  EXPECT_THROW(quadrature_oracle(quad, vec({0.1, 0.2}), 4), InvalidInput);
}

struct Moments {
  Vector mean;
  Vector var;
};

Moments sample_moments(const StochasticProblem& p, int draws) {
  Rng rng(31337);
  Vector sum = Vector::Zero(p.dim_param());
  Vector sum_sq = Vector::Zero(p.dim_param());
  for (int k = 0; k < draws; ++k) {
    const ParameterSample x = p.sample_param(rng);
    sum += x;
    sum_sq += x.cwiseProduct(x);
  }
  Moments m;
  m.mean = sum / draws;
  m.var = sum_sq / draws - m.mean.cwiseProduct(m.mean);
  return m;
}

TEST(Sampling, MomentsMatchTheParameterMeasures) {
  const int n = 100000;
  struct Case {
    const char* name;
    double var;
    double fourth;  // E[x^4], for the variance of the sample variance
  };
  for (const Case& c : {Case{"quadratic", 1.0 / 12, 1.0 / 80}, Case{"bump", 1.0 / 3, 1.0 / 5},
                        Case{"rosenbrock", 1.0, 3.0}}) {
    auto p = make_problem(c.name);
    const Moments m = sample_moments(*p, n);
    const double mean_tol = 3.0 * std::sqrt(c.var / n);
    const double var_tol = 3.0 * std::sqrt((c.fourth - c.var * c.var) / n);
    for (Eigen::Index i = 0; i < m.mean.size(); ++i) {
      EXPECT_NEAR(m.mean(i), 0.0, mean_tol) << c.name;
      EXPECT_NEAR(m.var(i), c.var, var_tol) << c.name;
    }
  }
}

TEST(Sampling, QuadraticAndBumpStayInSupport) {
  QuadraticProblem1D quad;
  BumpProblem5D bump;
  Rng rng(5);
  for (int k = 0; k < 10000; ++k) {
    EXPECT_LE(std::abs(quad.sample_param(rng)(0)), 0.5);
    EXPECT_LE(bump.sample_param(rng).cwiseAbs().maxCoeff(), 1.0);
  }
}

}  // namespace
}  // namespace csgopt
