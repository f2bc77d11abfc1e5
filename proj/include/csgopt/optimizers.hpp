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

#ifndef CSGOPT_OPTIMIZERS_HPP
#define CSGOPT_OPTIMIZERS_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "csgopt/history.hpp"
#include "csgopt/line_search.hpp"
#include "csgopt/problem.hpp"

namespace csgopt {

// Optimizer specifications ---------------------------------------------------

/// CSG with a fixed step tau (convergent for tau < 2/L).
struct CsgConstant {
  double tau;
};

/// CSG with the bisection backtracking search started at schedule(n).
struct CsgBacktracking {
  StepSchedule schedule;
  LineSearchConfig line_search;
};

/// CSG with backtracking started at 1 / C_n, C_n the clamped curvature guess.
struct Scibl {
  double c_min = 1e-8;
  double c_max = 1e8;
  LineSearchConfig line_search;
};

/// Projected single-sample stochastic gradient.
struct Sg {
  StepSchedule schedule;
};

/// Diagonal AdaGrad, projected onto the feasible set.
struct AdaGrad {
  StepSchedule schedule;
  double eps = 1e-8;
};

using OptimizerSpec = std::variant<CsgConstant, CsgBacktracking, Scibl, Sg, AdaGrad>;

std::string optimizer_name(const OptimizerSpec& spec);

/// Throws InvalidInput if any embedded parameter is out of range.
void validate(const OptimizerSpec& spec);

// Runs -------------------------------------------------------------------------

struct RunConfig {
  std::size_t max_iters = 500;
  std::uint64_t seed = 0;
  /// Stop early once ||P(u_n - G_n) - u_n|| <= stop_residual.
  std::optional<double> stop_residual;
  std::size_t trace_every = 1;
  /// Evaluate analytic oracles (error to minimizer, approximation errors)
  /// for every recorded row when the problem provides them.
  bool record_oracle = true;
  /// Keep the full sample history in the returned trace.
  bool keep_history = false;
};

struct TraceRow {
  std::size_t n = 0;
  DesignPoint u;       ///< iterate at which sample n was drawn
  double eta0 = 0.0;   ///< initial trial step (equals tau for fixed-step methods)
  double tau = 0.0;    ///< step actually taken
  double j_hat = 0.0;  ///< objective estimate at u (single sample for SG / AdaGrad)
  Vector g_hat;        ///< search direction before scaling
  double g_hat_norm = 0.0;
  /// ||P(u - g_hat) - u||
  double residual = 0.0;
  int refinements = 0;
  std::optional<double> lipschitz;  ///< C_n (SCIBL only)
  std::optional<double> error;      ///< ||u - u*||
  std::optional<double> true_residual;  ///< residual with the exact gradient
  std::optional<double> j_error;    ///< |j_hat - J(u)|
  std::optional<double> g_error;    ///< ||g_hat - grad J(u)||
};

struct IterateTrace {
  std::string optimizer;
  std::vector<TraceRow> rows;
  DesignPoint initial_u;
  DesignPoint final_u;  ///< iterate after the last step
  std::optional<double> final_error;
  std::size_t iterations = 0;
  long long total_refinements = 0;
  std::vector<std::string> warnings;
  /// Populated only with RunConfig::keep_history for CSG variants.
  std::optional<SampleHistory> history;
};

/// True once n reaches max_iters, or when residual stopping is enabled and the
/// row's residual is at or below the threshold.
bool stop_check(const TraceRow& last, const RunConfig& cfg);

IterateTrace run_csg_constant(const StochasticProblem& problem, double tau, const RunConfig& cfg,
                              const DesignPoint& u0);

IterateTrace run_bcsg(const StochasticProblem& problem, const StepSchedule& schedule,
                      const LineSearchConfig& line_cfg, const RunConfig& cfg,
                      const DesignPoint& u0);

IterateTrace run_scibl(const StochasticProblem& problem, double c_min, double c_max,
                       const LineSearchConfig& line_cfg, const RunConfig& cfg,
                       const DesignPoint& u0);

IterateTrace run_sg(const StochasticProblem& problem, const StepSchedule& schedule,
                    const RunConfig& cfg, const DesignPoint& u0);

IterateTrace run_adagrad(const StochasticProblem& problem, const StepSchedule& schedule,
                         double eps, const RunConfig& cfg, const DesignPoint& u0);

/// Dispatches on the spec variant.
IterateTrace run(const StochasticProblem& problem, const OptimizerSpec& spec,
                 const RunConfig& cfg, const DesignPoint& u0);

}  // namespace csgopt

#endif  // CSGOPT_OPTIMIZERS_HPP
