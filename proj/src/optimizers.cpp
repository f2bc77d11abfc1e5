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

#include "csgopt/optimizers.hpp"

#include <cmath>
#include <sstream>
#include <utility>

#include "csgopt/error.hpp"

namespace csgopt {
namespace {

struct StepChoice {
  double tau = 0.0;
  double eta0 = 0.0;
  int refinements = 0;
  std::optional<double> lipschitz;
};

void check_start(const StochasticProblem& problem, const DesignPoint& u0, const RunConfig& cfg) {
  check_design_point(problem, u0);
  detail::require(problem.feasible_set().contains(u0), "starting point must lie in U");
  detail::require(cfg.max_iters >= 1, "max_iters must be at least 1");
  detail::require(cfg.trace_every >= 1, "trace_every must be at least 1");
  detail::require(!cfg.stop_residual || *cfg.stop_residual >= 0.0,
                  "stop_residual must be nonnegative");
}

struct Sample {
  ParameterSample x;
  double j;
  Vector g;
};

Sample draw_sample(const StochasticProblem& problem, const DesignPoint& u, Rng& rng,
                   std::size_t n) {
  Sample s;
  s.x = problem.sample_param(rng);
  s.j = problem.eval_integrand(u, s.x);
  s.g = problem.eval_integrand_grad(u, s.x);
  if (!std::isfinite(s.j) || s.g.size() != problem.dim_design() || !s.g.allFinite()) {
    throw EvaluationError("non-finite or malformed sample from " + problem.name(), n);
  }
  return s;
}

void fill_oracle(TraceRow& row, const StochasticProblem& problem) {
  if (auto u_star = problem.known_minimizer()) row.error = (row.u - *u_star).norm();
  if (auto grad = problem.true_gradient(row.u)) {
    row.true_residual = stationarity_residual(problem, row.u, *grad, 1.0);
    row.g_error = (row.g_hat - *grad).norm();
  }
  if (auto value = problem.true_objective(row.u)) row.j_error = std::abs(row.j_hat - *value);
}

/// Shared loop bookkeeping: row recording, stopping, and the final summary.
class TraceBuilder {
 public:
  TraceBuilder(const StochasticProblem& problem, const RunConfig& cfg, std::string name,
               const DesignPoint& u0)
      : problem_(problem), cfg_(cfg) {
    trace_.optimizer = std::move(name);
    trace_.initial_u = u0;
  }

  /// Records the row if due and reports whether the run should stop.
  bool finish_iteration(TraceRow row, const DesignPoint& next_u) {
    trace_.iterations = row.n;
    trace_.total_refinements += row.refinements;
    const bool stop = stop_check(row, cfg_);
    if ((row.n - 1) % cfg_.trace_every == 0 || stop) {
      if (cfg_.record_oracle) fill_oracle(row, problem_);
      trace_.rows.push_back(std::move(row));
    }
    trace_.final_u = next_u;
    return stop;
  }

  IterateTrace finish() {
    if (auto u_star = problem_.known_minimizer()) {
      trace_.final_error = (trace_.final_u - *u_star).norm();
    }
    return std::move(trace_);
  }

  IterateTrace& trace() { return trace_; }

 private:
  const StochasticProblem& problem_;
  const RunConfig& cfg_;
  IterateTrace trace_;
};

/// Aggregated-gradient loop shared by the CSG variants. `choose_step` picks
/// tau_n given the iteration, the history, the iterate, the aggregate at the
/// iterate and the objective memory (newest first).
template <class StepRule>
IterateTrace run_csg_loop(const StochasticProblem& problem, const RunConfig& cfg,
                          const DesignPoint& u0, std::string name, std::size_t memory_len,
                          StepRule&& choose_step) {
  check_start(problem, u0, cfg);
  TraceBuilder builder(problem, cfg, std::move(name), u0);
  SampleHistory history(problem.dim_design(), problem.dim_param());
  Rng rng(cfg.seed);
  const FeasibleSet& set = problem.feasible_set();

  std::vector<double> memory;
  DesignPoint u = u0;
  for (std::size_t n = 1;; ++n) {
    Sample sample = draw_sample(problem, u, rng, n);
    history.append(u, sample.x, sample.j, sample.g);

    const AggregateEstimate est = estimate_at(history, u);
    memory.insert(memory.begin(), est.j_hat);
    if (memory.size() > memory_len) memory.pop_back();

    const StepChoice step = choose_step(n, HistoryView(history), u, est, memory);
    DesignPoint next = set.project(u - step.tau * est.g_hat);

    TraceRow row;
    row.n = n;
    row.u = u;
    row.eta0 = step.eta0;
    row.tau = step.tau;
    row.j_hat = est.j_hat;
    row.g_hat = est.g_hat;
    row.g_hat_norm = est.g_hat.norm();
    row.residual = stationarity_residual(set, u, est.g_hat, 1.0);
    row.refinements = step.refinements;
    row.lipschitz = step.lipschitz;
    const bool stop = builder.finish_iteration(std::move(row), next);
    u = std::move(next);
    if (stop) break;
  }
  if (cfg.keep_history) builder.trace().history = std::move(history);
  return builder.finish();
}

/// Single-sample loop shared by SG and AdaGrad. `direction` maps (n, g_n) to
/// the scaled step tau_n * d_n and reports tau_n.
template <class Direction>
IterateTrace run_single_sample_loop(const StochasticProblem& problem, const RunConfig& cfg,
                                    const DesignPoint& u0, std::string name,
                                    Direction&& direction) {
  check_start(problem, u0, cfg);
  TraceBuilder builder(problem, cfg, std::move(name), u0);
  Rng rng(cfg.seed);
  const FeasibleSet& set = problem.feasible_set();

  DesignPoint u = u0;
  for (std::size_t n = 1;; ++n) {
    Sample sample = draw_sample(problem, u, rng, n);
    double tau = 0.0;
    const Vector step = direction(n, sample.g, tau);
    DesignPoint next = set.project(u - step);

    TraceRow row;
    row.n = n;
    row.u = u;
    row.eta0 = tau;
    row.tau = tau;
    row.j_hat = sample.j;
    row.residual = stationarity_residual(set, u, sample.g, 1.0);
    row.g_hat_norm = sample.g.norm();
    row.g_hat = std::move(sample.g);
    const bool stop = builder.finish_iteration(std::move(row), next);
    u = std::move(next);
    if (stop) break;
  }
  return builder.finish();
}

std::string format_double(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

}  // namespace

std::string optimizer_name(const OptimizerSpec& spec) {
  struct Visitor {
    std::string operator()(const CsgConstant&) const { return "csg"; }
    std::string operator()(const CsgBacktracking&) const { return "bcsg"; }
    std::string operator()(const Scibl&) const { return "scibl"; }
    std::string operator()(const Sg&) const { return "sg"; }
    std::string operator()(const AdaGrad&) const { return "adagrad"; }
  };
  return std::visit(Visitor{}, spec);
}

void validate(const OptimizerSpec& spec) {
  struct Visitor {
    void operator()(const CsgConstant& s) const {
      detail::require(std::isfinite(s.tau) && s.tau >= 0.0, "CSG step must be >= 0");
    }
    void operator()(const CsgBacktracking& s) const {
      validate(s.schedule);
      detail::require(schedule_value(s.schedule, 1) > 0.0, "backtracking needs eta > 0");
      s.line_search.validate();
    }
    void operator()(const Scibl& s) const {
      LipschitzEstimator check(s.c_min, s.c_max);
      s.line_search.validate();
    }
    void operator()(const Sg& s) const { validate(s.schedule); }
    void operator()(const AdaGrad& s) const {
      validate(s.schedule);
      detail::require(std::isfinite(s.eps) && s.eps > 0.0, "AdaGrad needs eps > 0");
    }
  };
  std::visit(Visitor{}, spec);
}

bool stop_check(const TraceRow& last, const RunConfig& cfg) {
  if (last.n >= cfg.max_iters) return true;
  return cfg.stop_residual.has_value() && last.residual <= *cfg.stop_residual;
}

IterateTrace run_csg_constant(const StochasticProblem& problem, double tau, const RunConfig& cfg,
                              const DesignPoint& u0) {
  validate(OptimizerSpec{CsgConstant{tau}});
  std::vector<std::string> warnings;
  if (auto lipschitz = problem.known_lipschitz(); lipschitz && tau >= 2.0 / *lipschitz) {
    warnings.push_back("constant step " + format_double(tau) + " is not below 2/L = " +
                       format_double(2.0 / *lipschitz));
  }
  auto trace = run_csg_loop(problem, cfg, u0, "csg", 1,
                            [tau](std::size_t, HistoryView, const DesignPoint&,
                                  const AggregateEstimate&, const std::vector<double>&) {
                              return StepChoice{tau, tau, 0, std::nullopt};
                            });
  trace.warnings = std::move(warnings);
  return trace;
}

IterateTrace run_bcsg(const StochasticProblem& problem, const StepSchedule& schedule,
                      const LineSearchConfig& line_cfg, const RunConfig& cfg,
                      const DesignPoint& u0) {
  validate(OptimizerSpec{CsgBacktracking{schedule, line_cfg}});
  const FeasibleSet& set = problem.feasible_set();
  return run_csg_loop(
      problem, cfg, u0, "bcsg", static_cast<std::size_t>(line_cfg.memory) + 1,
      [&](std::size_t n, HistoryView history, const DesignPoint& u, const AggregateEstimate& est,
          const std::vector<double>& memory) {
        const double eta0 = schedule_value(schedule, n);
        const LineSearchResult ls =
            backtracking_refine(history, u, est.g_hat, memory, eta0, line_cfg, set);
        return StepChoice{ls.tau, eta0, ls.refinements, std::nullopt};
      });
}

IterateTrace run_scibl(const StochasticProblem& problem, double c_min, double c_max,
                       const LineSearchConfig& line_cfg, const RunConfig& cfg,
                       const DesignPoint& u0) {
  LipschitzEstimator estimator(c_min, c_max);
  line_cfg.validate();
  const FeasibleSet& set = problem.feasible_set();
  return run_csg_loop(
      problem, cfg, u0, "scibl", static_cast<std::size_t>(line_cfg.memory) + 1,
      [&](std::size_t, HistoryView history, const DesignPoint& u, const AggregateEstimate& est,
          const std::vector<double>& memory) {
        const double c_n = estimator.update(u, est.g_hat);
        const double eta0 = 1.0 / c_n;
        const LineSearchResult ls =
            backtracking_refine(history, u, est.g_hat, memory, eta0, line_cfg, set);
        return StepChoice{ls.tau, eta0, ls.refinements, c_n};
      });
}

IterateTrace run_sg(const StochasticProblem& problem, const StepSchedule& schedule,
                    const RunConfig& cfg, const DesignPoint& u0) {
  validate(schedule);
  return run_single_sample_loop(problem, cfg, u0, "sg",
                                [&](std::size_t n, const Vector& g, double& tau) -> Vector {
                                  tau = schedule_value(schedule, n);
                                  return tau * g;
                                });
}

IterateTrace run_adagrad(const StochasticProblem& problem, const StepSchedule& schedule,
                         double eps, const RunConfig& cfg, const DesignPoint& u0) {
  validate(OptimizerSpec{AdaGrad{schedule, eps}});
  Vector accumulator = Vector::Zero(problem.dim_design());
  return run_single_sample_loop(
      problem, cfg, u0, "adagrad", [&](std::size_t n, const Vector& g, double& tau) -> Vector {
        tau = schedule_value(schedule, n);
        accumulator += g.cwiseProduct(g);
        return tau * g.cwiseQuotient((accumulator.cwiseSqrt().array() + eps).matrix());
      });
}

IterateTrace run(const StochasticProblem& problem, const OptimizerSpec& spec,
                 const RunConfig& cfg, const DesignPoint& u0) {
  struct Visitor {
    const StochasticProblem& problem;
    const RunConfig& cfg;
    const DesignPoint& u0;
    IterateTrace operator()(const CsgConstant& s) const {
      return run_csg_constant(problem, s.tau, cfg, u0);
    }
    IterateTrace operator()(const CsgBacktracking& s) const {
      return run_bcsg(problem, s.schedule, s.line_search, cfg, u0);
    }
    IterateTrace operator()(const Scibl& s) const {
      return run_scibl(problem, s.c_min, s.c_max, s.line_search, cfg, u0);
    }
    IterateTrace operator()(const Sg& s) const { return run_sg(problem, s.schedule, cfg, u0); }
    IterateTrace operator()(const AdaGrad& s) const {
      return run_adagrad(problem, s.schedule, s.eps, cfg, u0);
    }
  };
  return std::visit(Visitor{problem, cfg, u0}, spec);
}

}  // namespace csgopt
