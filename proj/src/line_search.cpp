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

#include <algorithm>
#include <cmath>
#include <limits>

#include "csgopt/error.hpp"

namespace csgopt {

void LineSearchConfig::validate() const {
  detail::require(max_trials >= 1, "line search needs T >= 1");
  detail::require(memory >= 0, "line search memory K must be nonnegative");
  detail::require(0.0 < c1 && c1 < c2 && c2 < 1.0, "line search needs 0 < c1 < c2 < 1");
}

bool check_sw1_star(double j_trial, std::span<const double> memory,
                    const Eigen::Ref<const Vector>& g_hat, const Eigen::Ref<const Vector>& u,
                    const Eigen::Ref<const Vector>& s, double c1) {
  detail::require(!memory.empty(), "sufficient decrease test needs a nonempty memory");
  detail::require(g_hat.size() == u.size() && s.size() == u.size(),
                  "sufficient decrease test: dimension mismatch");
  const double reference = *std::max_element(memory.begin(), memory.end());
  return j_trial <= reference - c1 * g_hat.dot(u - s);
}

bool check_sw2(const Eigen::Ref<const Vector>& g_trial, const Eigen::Ref<const Vector>& g_hat,
               const Eigen::Ref<const Vector>& u, const Eigen::Ref<const Vector>& s, double c2) {
  detail::require(g_trial.size() == u.size() && g_hat.size() == u.size() && s.size() == u.size(),
                  "curvature test: dimension mismatch");
  const Vector step = s - u;
  return g_trial.dot(step) >= c2 * g_hat.dot(step);
}

LineSearchResult backtracking_refine(const TrialEstimator& estimator,
                                     const Eigen::Ref<const Vector>& u,
                                     const Eigen::Ref<const Vector>& g_hat,
                                     std::span<const double> memory, double eta0,
                                     const LineSearchConfig& cfg, const FeasibleSet& set) {
  cfg.validate();
  detail::require(std::isfinite(eta0) && eta0 > 0.0, "line search needs eta0 > 0");
  detail::require(g_hat.allFinite(), "line search needs a finite direction");
  detail::require(!memory.empty(), "line search needs a nonempty objective memory");

  constexpr double kInf = std::numeric_limits<double>::infinity();
  double a = 0.0;
  double b = kInf;
  double eta_a = kInf;
  double eta = eta0;
  int t = 1;

  LineSearchResult result;
  result.trials.reserve(static_cast<std::size_t>(cfg.max_trials));
  bool accepted = false;
  while (t <= cfg.max_trials) {
    const Vector unprojected = u - eta * g_hat;
    const Vector s = set.project(unprojected);
    const AggregateEstimate trial = estimator(s);
    if (!std::isfinite(trial.j_hat) || !trial.g_hat.allFinite()) {
      throw EvaluationError("non-finite estimate at a line search trial point", 0);
    }

    BisectionState state;
    state.eta = eta;
    state.t = t;
    state.sw1_star = check_sw1_star(trial.j_hat, memory, g_hat, u, s, cfg.c1);
    state.projection_inactive = (s - unprojected).norm() <= kInactiveProjectionTol;
    if (state.sw1_star && state.projection_inactive) {
      state.sw2 = check_sw2(trial.g_hat, g_hat, u, s, cfg.c2);
    }
    if (!state.sw1_star) {
      b = eta;
    } else if (state.projection_inactive && !state.sw2) {
      a = eta;
      eta_a = eta;
    } else {
      accepted = true;
    }
    state.a = a;
    state.b = b;
    state.eta_a = eta_a;
    result.trials.push_back(state);
    if (accepted) break;

    eta = (b < kInf) ? (a + b) / 2.0 : 2.0 * a;
    ++t;
  }

  result.refinements = static_cast<int>(result.trials.size());
  if (accepted) {
    result.tau = eta;
    result.exit = LineSearchExit::kAccepted;
  } else if (eta_a < kInf) {
    result.tau = eta_a;
    result.exit = LineSearchExit::kLastCurvature;
  } else {
    result.tau = eta;
    result.exit = LineSearchExit::kExhausted;
  }
  return result;
}

LineSearchResult backtracking_refine(HistoryView history, const Eigen::Ref<const Vector>& u,
                                     const Eigen::Ref<const Vector>& g_hat,
                                     std::span<const double> memory, double eta0,
                                     const LineSearchConfig& cfg, const FeasibleSet& set) {
  const TrialEstimator estimator = [history](const Vector& s) { return estimate_at(history, s); };
  return backtracking_refine(estimator, u, g_hat, memory, eta0, cfg, set);
}

// Schedules ------------------------------------------------------------------

void validate(const StepSchedule& schedule) {
  if (const auto* c = std::get_if<ConstantStep>(&schedule)) {
    detail::require(std::isfinite(c->tau) && c->tau >= 0.0, "constant step must be >= 0");
    return;
  }
  const auto& p = std::get<PowerDecayStep>(schedule);
  detail::require(std::isfinite(p.tau0) && p.tau0 > 0.0, "power decay needs tau0 > 0");
  detail::require(p.d >= 0.0 && p.d <= 1.0, "power decay needs d in [0, 1]");
}

double schedule_value(const StepSchedule& schedule, std::size_t n) {
  detail::require(n >= 1, "step schedules are indexed from n = 1");
  if (const auto* c = std::get_if<ConstantStep>(&schedule)) return c->tau;
  const auto& p = std::get<PowerDecayStep>(schedule);
  if (p.d == 0.0) return p.tau0;
  return p.tau0 / std::pow(static_cast<double>(n), p.d);
}

// Lipschitz estimate -----------------------------------------------------------

LipschitzEstimator::LipschitzEstimator(double c_min, double c_max)
    : c_min_(c_min), c_max_(c_max), current_(c_max) {
  detail::require(std::isfinite(c_max) && c_min > 0.0 && c_min < c_max,
                  "Lipschitz bounds need 0 < c_min < c_max");
}

double LipschitzEstimator::update(const Eigen::Ref<const Vector>& u,
                                  const Eigen::Ref<const Vector>& g_hat) {
  detail::require(u.allFinite() && g_hat.allFinite(), "Lipschitz update: non-finite input");
  if (prev_u_) {
    const double displacement = (u - *prev_u_).norm();
    if (displacement >= kMinDisplacement) {
      const double quotient = (g_hat - *prev_g_).norm() / displacement;
      current_ = std::min(c_max_, std::max(c_min_, quotient));
    }
  } else {
    current_ = c_max_;
  }
  prev_u_ = u;
  prev_g_ = g_hat;
  return current_;
}

}  // namespace csgopt
