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

#include "csgopt/testbed.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "csgopt/error.hpp"

namespace csgopt {

// QuadraticProblem1D ----------------------------------------------------------

QuadraticProblem1D::QuadraticProblem1D() : set_(FeasibleSet::cube(1, -0.5, 0.5)) {}

ParameterSample QuadraticProblem1D::sample_param(Rng& rng) const {
  return Vector::Constant(1, rng.uniform(-0.5, 0.5));
}

double QuadraticProblem1D::eval_integrand(const Eigen::Ref<const Vector>& u,
                                          const Eigen::Ref<const Vector>& x) const {
  const double diff = u[0] - x[0];
  return 0.5 * diff * diff;
}

Vector QuadraticProblem1D::eval_integrand_grad(const Eigen::Ref<const Vector>& u,
                                               const Eigen::Ref<const Vector>& x) const {
  return Vector::Constant(1, u[0] - x[0]);
}

std::optional<double> QuadraticProblem1D::true_objective(const Eigen::Ref<const Vector>& u) const {
  return 0.5 * u[0] * u[0] + 1.0 / 24.0;
}

std::optional<Vector> QuadraticProblem1D::true_gradient(const Eigen::Ref<const Vector>& u) const {
  return Vector(u);
}

std::optional<DesignPoint> QuadraticProblem1D::known_minimizer() const {
  return Vector::Zero(1);
}

// BumpProblem5D -----------------------------------------------------------------

BumpProblem5D::BumpProblem5D() : set_(FeasibleSet::cube(kDim, -10.0, 10.0)) {}

ParameterSample BumpProblem5D::sample_param(Rng& rng) const {
  Vector x(kDim);
  for (int i = 0; i < kDim; ++i) x[i] = rng.uniform(-1.0, 1.0);
  return x;
}

double BumpProblem5D::eval_integrand(const Eigen::Ref<const Vector>& u,
                                     const Eigen::Ref<const Vector>& x) const {
  return -20.0 / (1.0 + (u - x).squaredNorm());
}

Vector BumpProblem5D::eval_integrand_grad(const Eigen::Ref<const Vector>& u,
                                          const Eigen::Ref<const Vector>& x) const {
  const Vector diff = u - x;
  const double denom = 1.0 + diff.squaredNorm();
  return (40.0 / (denom * denom)) * diff;
}

std::optional<DesignPoint> BumpProblem5D::known_minimizer() const { return Vector::Zero(kDim); }

// NoisyRosenbrock ---------------------------------------------------------------

NoisyRosenbrock::NoisyRosenbrock() : set_(FeasibleSet::cube(2, -3.0, 3.0)) {}

double NoisyRosenbrock::rosenbrock(double u1, double u2) {
  const double a = 1.0 - u1;
  const double b = u2 - u1 * u1;
  return a * a + 100.0 * b * b;
}

ParameterSample NoisyRosenbrock::sample_param(Rng& rng) const {
  return Vector::Constant(1, rng.normal());
}

double NoisyRosenbrock::eval_integrand(const Eigen::Ref<const Vector>& u,
                                       const Eigen::Ref<const Vector>& x) const {
  return (1.0 + x[0]) * rosenbrock(u[0], u[1]);
}

Vector NoisyRosenbrock::eval_integrand_grad(const Eigen::Ref<const Vector>& u,
                                            const Eigen::Ref<const Vector>& x) const {
  const Vector g = *true_gradient(u);
  return (1.0 + x[0]) * g;
}

std::optional<double> NoisyRosenbrock::true_objective(const Eigen::Ref<const Vector>& u) const {
  return rosenbrock(u[0], u[1]);
}

std::optional<Vector> NoisyRosenbrock::true_gradient(const Eigen::Ref<const Vector>& u) const {
  const double b = u[1] - u[0] * u[0];
  Vector g(2);
  g << -2.0 * (1.0 - u[0]) - 400.0 * u[0] * b, 200.0 * b;
  return g;
}

std::optional<DesignPoint> NoisyRosenbrock::known_minimizer() const {
  return Vector::Constant(2, 1.0);
}

std::unique_ptr<StochasticProblem> make_problem(const std::string& name) {
  if (name == "quadratic") return std::make_unique<QuadraticProblem1D>();
  if (name == "bump") return std::make_unique<BumpProblem5D>();
  if (name == "rosenbrock") return std::make_unique<NoisyRosenbrock>();
  throw InvalidInput("unknown problem '" + name + "'");
}

// Oracles -------------------------------------------------------------------------

namespace {

/// One-dimensional rule (nodes, weights) with weights summing to one.
struct Rule1D {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Gauss-Legendre rule on [lo, hi] with weights normalised to sum to one.
/// Nodes come from Newton iteration on the three-term Legendre recurrence.
Rule1D gauss_legendre(double lo, double hi, int m) {
  Rule1D rule;
  rule.nodes.resize(static_cast<std::size_t>(m));
  rule.weights.resize(static_cast<std::size_t>(m));
  const double pi = std::acos(-1.0);
  const double mid = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  for (int k = 0; k < (m + 1) / 2; ++k) {
    double z = std::cos(pi * (k + 0.75) / (m + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = 0.0;
      for (int j = 1; j <= m; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j - 1.0) * z * p1 - (j - 1.0) * p2) / j;
      }
      dp = m * (z * p0 - p1) / (z * z - 1.0);
      const double step = p0 / dp;
      z -= step;
      if (std::abs(step) < 1e-16) break;
    }
    // weights on [-1, 1] sum to 2; halve them for a probability rule
    const double w = 1.0 / ((1.0 - z * z) * dp * dp);
    rule.nodes[k] = mid - half * z;
    rule.nodes[m - 1 - k] = mid + half * z;
    rule.weights[k] = w;
    rule.weights[m - 1 - k] = w;
  }
  return rule;
}

Rule1D truncated_gaussian(double half_width, int m) {
  Rule1D rule = gauss_legendre(-half_width, half_width, m);
  double total = 0.0;
  for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
    const double x = rule.nodes[k];
    rule.weights[k] *= std::exp(-0.5 * x * x);
    total += rule.weights[k];
  }
  for (double& w : rule.weights) w /= total;
  return rule;
}

QuadratureResult tensor_quadrature(const StochasticProblem& problem,
                                   const Eigen::Ref<const Vector>& u, const Rule1D& rule,
                                   int dim) {
  QuadratureResult result;
  result.gradient = Vector::Zero(problem.dim_design());
  const int m = static_cast<int>(rule.nodes.size());
  std::vector<int> index(static_cast<std::size_t>(dim), 0);
  Vector x(dim);
  while (true) {
    double w = 1.0;
    for (int i = 0; i < dim; ++i) {
      x[i] = rule.nodes[index[i]];
      w *= rule.weights[index[i]];
    }
    result.value += w * problem.eval_integrand(u, x);
    result.gradient += w * problem.eval_integrand_grad(u, x);

    int axis = 0;
    while (axis < dim && ++index[axis] == m) index[axis++] = 0;
    if (axis == dim) break;
  }
  return result;
}

}  // namespace

QuadratureResult quadrature_oracle(const StochasticProblem& problem,
                                   const Eigen::Ref<const Vector>& u, int nodes_per_dim) {
  detail::require(nodes_per_dim >= 2, "quadrature needs at least 2 nodes per dimension");
  check_design_point(problem, u);
  if (dynamic_cast<const QuadraticProblem1D*>(&problem) != nullptr) {
    return tensor_quadrature(problem, u, gauss_legendre(-0.5, 0.5, nodes_per_dim), 1);
  }
  if (dynamic_cast<const BumpProblem5D*>(&problem) != nullptr) {
    return tensor_quadrature(problem, u, gauss_legendre(-1.0, 1.0, nodes_per_dim),
                             BumpProblem5D::kDim);
  }
  if (dynamic_cast<const NoisyRosenbrock*>(&problem) != nullptr) {
    return tensor_quadrature(problem, u, truncated_gaussian(8.0, nodes_per_dim), 1);
  }
  throw InvalidInput("quadrature oracle: unsupported parameter measure for " + problem.name());
}

double finite_difference_check(const StochasticProblem& problem,
                               const Eigen::Ref<const Vector>& u,
                               const Eigen::Ref<const Vector>& x, double h) {
  detail::require(std::isfinite(h) && h > 0.0, "finite differences need h > 0");
  check_design_point(problem, u);
  detail::require(x.size() == problem.dim_param(), "parameter sample has wrong dimension");
  detail::require(problem.feasible_set().interior_margin(u) > h,
                  "finite differences need u interior to U by more than h");

  constexpr double kZeroGradient = 1e-8;
  const Vector g = problem.eval_integrand_grad(u, x);
  double worst = 0.0;
  Vector probe = u;
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    probe[i] = u[i] + h;
    const double forward = problem.eval_integrand(probe, x);
    probe[i] = u[i] - h;
    const double backward = problem.eval_integrand(probe, x);
    probe[i] = u[i];
    const double fd = (forward - backward) / (2.0 * h);
    const double scale = std::max(std::abs(g[i]), std::abs(fd));
    const double err = std::abs(fd - g[i]);
    worst = std::max(worst, scale < kZeroGradient ? err : err / scale);
  }
  return worst;
}

}  // namespace csgopt
