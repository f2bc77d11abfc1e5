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

#ifndef CSGOPT_LINE_SEARCH_HPP
#define CSGOPT_LINE_SEARCH_HPP

#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "csgopt/feasible_set.hpp"
#include "csgopt/history.hpp"

namespace csgopt {

/// Parameters of the bisection backtracking search.
struct LineSearchConfig {
  int max_trials = 40;  ///< T
  double c1 = 1e-4;
  double c2 = 0.9;
  int memory = 1;  ///< K: the sufficient-decrease test compares against the
                   ///< max of the last K+1 objective estimates.

  /// Throws InvalidInput unless 0 < c1 < c2 < 1, T >= 1, K >= 0.
  void validate() const;
};

/// Tolerance on ||s - (u - eta g)|| below which the projection counts as
/// inactive and the curvature condition is consulted.
inline constexpr double kInactiveProjectionTol = 1e-12;

/// Non-monotone sufficient decrease:
///   j_trial <= max(memory) - c1 * g_hat . (u - s)
/// `memory` holds the most recent objective estimates, newest first. With one
/// entry this is the plain Armijo test. Throws InvalidInput if memory is empty.
bool check_sw1_star(double j_trial, std::span<const double> memory,
                    const Eigen::Ref<const Vector>& g_hat, const Eigen::Ref<const Vector>& u,
                    const Eigen::Ref<const Vector>& s, double c1);

/// Curvature condition  g_trial . (s - u) >= c2 * g_hat . (s - u).
bool check_sw2(const Eigen::Ref<const Vector>& g_trial, const Eigen::Ref<const Vector>& g_hat,
               const Eigen::Ref<const Vector>& u, const Eigen::Ref<const Vector>& s, double c2);

/// Bracket state after one trial of the bisection search.
struct BisectionState {
  double a = 0.0;
  double b = std::numeric_limits<double>::infinity();
  double eta_a = std::numeric_limits<double>::infinity();
  double eta = 0.0;  ///< step tried in this trial
  int t = 1;
  bool sw1_star = false;
  bool projection_inactive = false;
  bool sw2 = false;
};

enum class LineSearchExit {
  kAccepted,        ///< a trial passed and the loop broke early
  kLastCurvature,   ///< T trials used; returned the last SW1*-passing step
  kExhausted,       ///< T trials used without any SW1*-passing step
};

struct LineSearchResult {
  double tau = 0.0;
  int refinements = 0;  ///< number of trials evaluated, at most T
  LineSearchExit exit = LineSearchExit::kExhausted;
  std::vector<BisectionState> trials;
};

/// Returns the estimate (J~(s), G~(s)) at a trial point.
using TrialEstimator = std::function<AggregateEstimate(const Vector& s)>;

/// Bisection backtracking with doubling while the upper bracket is open.
///
/// Each trial projects u - eta * g_hat onto `set` and evaluates the estimator
/// there. A failed sufficient-decrease test closes the bracket from above; a
/// passed one with an inactive projection and a failed curvature test raises
/// the lower end and remembers eta; anything else accepts eta. After T trials
/// without acceptance the last remembered step is returned, or the final eta
/// if there is none, which then equals eta0 * 2^-T exactly.
LineSearchResult backtracking_refine(const TrialEstimator& estimator,
                                     const Eigen::Ref<const Vector>& u,
                                     const Eigen::Ref<const Vector>& g_hat,
                                     std::span<const double> memory, double eta0,
                                     const LineSearchConfig& cfg, const FeasibleSet& set);

/// Same search with the estimator backed by empirical weights over `history`.
LineSearchResult backtracking_refine(HistoryView history, const Eigen::Ref<const Vector>& u,
                                     const Eigen::Ref<const Vector>& g_hat,
                                     std::span<const double> memory, double eta0,
                                     const LineSearchConfig& cfg, const FeasibleSet& set);

// ---------------------------------------------------------------------------
// Step-size schedules

struct ConstantStep {
  double tau;
};

/// eta_n = tau0 / n^d
struct PowerDecayStep {
  double tau0;
  double d;
};

using StepSchedule = std::variant<ConstantStep, PowerDecayStep>;

void validate(const StepSchedule& schedule);

/// Step for iteration n >= 1. Throws InvalidInput for n == 0.
double schedule_value(const StepSchedule& schedule, std::size_t n);

// ---------------------------------------------------------------------------

/// Clamped difference quotient ||G_n - G_{n-1}|| / ||u_n - u_{n-1}|| used as a
/// local curvature guess.
class LipschitzEstimator {
 public:
  /// Displacements below this reuse the previous estimate.
  static constexpr double kMinDisplacement = 1e-14;

  /// Throws InvalidInput unless 0 < c_min < c_max.
  LipschitzEstimator(double c_min, double c_max);

  /// First call returns c_max. Always stores (u, g_hat) for the next call.
  double update(const Eigen::Ref<const Vector>& u, const Eigen::Ref<const Vector>& g_hat);

  double current() const { return current_; }
  double c_min() const { return c_min_; }
  double c_max() const { return c_max_; }

 private:
  double c_min_;
  double c_max_;
  double current_;
  std::optional<Vector> prev_u_;
  std::optional<Vector> prev_g_;
};

}  // namespace csgopt

#endif  // CSGOPT_LINE_SEARCH_HPP
