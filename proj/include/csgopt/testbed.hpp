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

#ifndef CSGOPT_TESTBED_HPP
#define CSGOPT_TESTBED_HPP

#include <memory>
#include <string>

#include "csgopt/problem.hpp"

namespace csgopt {

/// min over [-1/2, 1/2] of E[(u - x)^2 / 2], x ~ U(-1/2, 1/2).
/// J(u) = u^2/2 + 1/24, grad J(u) = u, u* = 0, L = 1.
class QuadraticProblem1D final : public StochasticProblem {
 public:
  QuadraticProblem1D();

  std::string name() const override { return "quadratic"; }
  int dim_design() const override { return 1; }
  int dim_param() const override { return 1; }
  ParameterSample sample_param(Rng& rng) const override;
  double eval_integrand(const Eigen::Ref<const Vector>& u,
                        const Eigen::Ref<const Vector>& x) const override;
  Vector eval_integrand_grad(const Eigen::Ref<const Vector>& u,
                             const Eigen::Ref<const Vector>& x) const override;
  const FeasibleSet& feasible_set() const override { return set_; }

  std::optional<double> true_objective(const Eigen::Ref<const Vector>& u) const override;
  std::optional<Vector> true_gradient(const Eigen::Ref<const Vector>& u) const override;
  std::optional<DesignPoint> known_minimizer() const override;
  std::optional<double> known_lipschitz() const override { return 1.0; }

 private:
  FeasibleSet set_;
};

/// min over [-10, 10]^5 of E[-20 / (1 + ||u - x||^2)], x ~ U(-1, 1)^5.
/// Unique minimizer u* = 0; no closed-form objective (see quadrature_oracle).
class BumpProblem5D final : public StochasticProblem {
 public:
  static constexpr int kDim = 5;

  BumpProblem5D();

  std::string name() const override { return "bump"; }
  int dim_design() const override { return kDim; }
  int dim_param() const override { return kDim; }
  ParameterSample sample_param(Rng& rng) const override;
  double eval_integrand(const Eigen::Ref<const Vector>& u,
                        const Eigen::Ref<const Vector>& x) const override;
  Vector eval_integrand_grad(const Eigen::Ref<const Vector>& u,
                             const Eigen::Ref<const Vector>& x) const override;
  const FeasibleSet& feasible_set() const override { return set_; }
  std::optional<DesignPoint> known_minimizer() const override;

 private:
  FeasibleSet set_;
};

/// Rosenbrock function with multiplicative noise (1 + x), x ~ N(0, 1), over
/// [-3, 3]^2. Since E[1 + x] = 1 the objective is the plain Rosenbrock
/// function with minimizer (1, 1).
class NoisyRosenbrock final : public StochasticProblem {
 public:
  NoisyRosenbrock();

  std::string name() const override { return "rosenbrock"; }
  int dim_design() const override { return 2; }
  int dim_param() const override { return 1; }
  ParameterSample sample_param(Rng& rng) const override;
  double eval_integrand(const Eigen::Ref<const Vector>& u,
                        const Eigen::Ref<const Vector>& x) const override;
  Vector eval_integrand_grad(const Eigen::Ref<const Vector>& u,
                             const Eigen::Ref<const Vector>& x) const override;
  const FeasibleSet& feasible_set() const override { return set_; }

  std::optional<double> true_objective(const Eigen::Ref<const Vector>& u) const override;
  std::optional<Vector> true_gradient(const Eigen::Ref<const Vector>& u) const override;
  std::optional<DesignPoint> known_minimizer() const override;

  static double rosenbrock(double u1, double u2);

 private:
  FeasibleSet set_;
};

/// Builds a testbed problem by name: "quadratic", "bump" or "rosenbrock".
std::unique_ptr<StochasticProblem> make_problem(const std::string& name);

struct QuadratureResult {
  double value = 0.0;
  Vector gradient;
};

/// Tensor-product quadrature of j and grad_u j over the parameter measure.
///
/// Every axis uses a Gauss-Legendre rule with `nodes_per_dim` nodes. The
/// Gaussian parameter of NoisyRosenbrock is truncated to [-8, 8] and its
/// Legendre weights are multiplied by the density, then renormalised so they
/// sum to one. Throws InvalidInput for nodes_per_dim < 2 or for a
/// problem whose measure is not known to this routine.
QuadratureResult quadrature_oracle(const StochasticProblem& problem,
                                   const Eigen::Ref<const Vector>& u, int nodes_per_dim);

/// Max discrepancy between central differences of j(., x) and the analytic
/// gradient, relative per component; components where both are below 1e-8 in
/// magnitude contribute their absolute error instead. Throws InvalidInput
/// unless u is interior to U by more than h.
double finite_difference_check(const StochasticProblem& problem,
                               const Eigen::Ref<const Vector>& u,
                               const Eigen::Ref<const Vector>& x, double h);

}  // namespace csgopt

#endif  // CSGOPT_TESTBED_HPP
