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

#ifndef CSGOPT_PROBLEM_HPP
#define CSGOPT_PROBLEM_HPP

#include <optional>
#include <string>

#include "csgopt/feasible_set.hpp"
#include "csgopt/rng.hpp"

namespace csgopt {

/// Expected-value problem  min_{u in U} E_x[ j(u, x) ],  x ~ mu.
///
/// Implementations must be deterministic in (u, x) and safe to share between
/// threads for evaluation; every random draw goes through the caller's Rng.
class StochasticProblem {
 public:
  virtual ~StochasticProblem() = default;

  virtual std::string name() const = 0;
  virtual int dim_design() const = 0;
  virtual int dim_param() const = 0;

  virtual ParameterSample sample_param(Rng& rng) const = 0;
  /// j(u, x)
  virtual double eval_integrand(const Eigen::Ref<const Vector>& u,
                                const Eigen::Ref<const Vector>& x) const = 0;
  /// Gradient of j with respect to u.
  virtual Vector eval_integrand_grad(const Eigen::Ref<const Vector>& u,
                                     const Eigen::Ref<const Vector>& x) const = 0;

  virtual const FeasibleSet& feasible_set() const = 0;

  // Optional analytic oracles. Problems without closed forms return nullopt.
  virtual std::optional<double> true_objective(const Eigen::Ref<const Vector>&) const {
    return std::nullopt;
  }
  virtual std::optional<Vector> true_gradient(const Eigen::Ref<const Vector>&) const {
    return std::nullopt;
  }
  virtual std::optional<DesignPoint> known_minimizer() const { return std::nullopt; }
  virtual std::optional<double> known_lipschitz() const { return std::nullopt; }
};

/// Throws InvalidInput unless `u` has the problem's design dimension and
/// finite coordinates.
void check_design_point(const StochasticProblem& problem, const Eigen::Ref<const Vector>& u);

inline double stationarity_residual(const StochasticProblem& problem,
                                    const Eigen::Ref<const Vector>& u,
                                    const Eigen::Ref<const Vector>& g, double t) {
  return stationarity_residual(problem.feasible_set(), u, g, t);
}

}  // namespace csgopt

#endif  // CSGOPT_PROBLEM_HPP
