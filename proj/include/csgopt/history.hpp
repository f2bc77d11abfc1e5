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

#ifndef CSGOPT_HISTORY_HPP
#define CSGOPT_HISTORY_HPP

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "csgopt/feasible_set.hpp"

namespace csgopt {

/// One stored sample (u_k, x_k, j(u_k, x_k), grad_u j(u_k, x_k)).
struct SampleRecord {
  DesignPoint u;
  ParameterSample x;
  double j = 0.0;
  Vector g;
};

class SampleHistory;

/// Read-only view of the first `size()` records of a history. Because the
/// history is append-only, a prefix view reproduces the history exactly as it
/// was at that iteration.
class HistoryView {
 public:
  HistoryView(const SampleHistory& history);  // NOLINT: implicit by intent
  HistoryView(const SampleHistory& history, std::size_t count);

  std::size_t size() const { return count_; }
  bool empty() const { return count_ == 0; }
  int dim_design() const { return dim_design_; }
  int dim_param() const { return dim_param_; }

  Eigen::Map<const Vector> u(std::size_t k) const {
    return Eigen::Map<const Vector>(us_ + k * dim_design_, dim_design_);
  }
  Eigen::Map<const Vector> x(std::size_t k) const {
    return Eigen::Map<const Vector>(xs_ + k * dim_param_, dim_param_);
  }
  Eigen::Map<const Vector> g(std::size_t k) const {
    return Eigen::Map<const Vector>(gs_ + k * dim_design_, dim_design_);
  }
  double j(std::size_t k) const { return js_[k]; }

  /// Every record of the underlying history as (x[0], index), sorted. Entries
  /// with index >= size() lie outside this view.
  std::span<const std::pair<double, std::size_t>> param_order() const { return order_; }

  /// Packed lower triangle of ||x_i - x_m|| (entry i*(i-1)/2 + m for m < i),
  /// or nullptr when the history does not cache parameter distances.
  const double* param_distances() const { return param_distances_; }

  /// Lower bound on min_{m != k} ||x_k - x_m|| over this view (exact for the
  /// full history; +infinity for a lone record).
  double nearest_param_distance(std::size_t k) const { return nearest_[k]; }

 private:
  std::span<const std::pair<double, std::size_t>> order_;
  const double* us_;
  const double* xs_;
  const double* gs_;
  const double* js_;
  const double* param_distances_;
  const double* nearest_;
  std::size_t count_;
  int dim_design_;
  int dim_param_;
};

/// Append-only archive of every sample drawn during a run. Records are stored
/// column-contiguously so nearest-neighbour scans stay cache friendly.
class SampleHistory {
 public:
  /// Histories with multi-dimensional parameters cache pairwise parameter
  /// distances up to this many records.
  static constexpr std::size_t kParamDistanceCacheLimit = 4096;

  SampleHistory(int dim_design, int dim_param);

  /// Throws InvalidInput on dimension mismatch or non-finite j / g.
  void append(const Eigen::Ref<const Vector>& u, const Eigen::Ref<const Vector>& x, double j,
              const Eigen::Ref<const Vector>& g);
  void append(const SampleRecord& record) { append(record.u, record.x, record.j, record.g); }

  std::size_t size() const { return js_.size(); }
  bool empty() const { return js_.empty(); }
  int dim_design() const { return dim_design_; }
  int dim_param() const { return dim_param_; }

  SampleRecord record(std::size_t k) const;
  HistoryView prefix(std::size_t count) const { return HistoryView(*this, count); }

 private:
  friend class HistoryView;

  int dim_design_;
  int dim_param_;
  std::vector<double> us_;
  std::vector<double> xs_;
  std::vector<double> gs_;
  std::vector<double> js_;
  std::vector<std::pair<double, std::size_t>> x_order_;
  std::vector<double> param_distances_;
  std::vector<double> nearest_;
};

/// Convex-combination weights over the history (nonnegative, summing to one).
struct WeightVector {
  std::vector<double> alphas;

  std::size_t size() const { return alphas.size(); }
};

/// Weighted objective / gradient estimate at a point.
struct AggregateEstimate {
  double j_hat = 0.0;
  Vector g_hat;
};

/// Distance used to match a sample to a record: ||u - u_m|| + ||x - x_m||.
inline double record_distance(double design_distance, double param_distance) {
  return design_distance + param_distance;
}

/// Empirical integration weights at `u`.
///
/// Every stored parameter sample x_i votes for the record m minimising
/// ||u - u_m|| + ||x_i - x_m|| (lowest index on ties); alpha_m is the share of
/// votes record m collects. Each search walks the records outward from x_i in
/// order of the first parameter coordinate and stops once that coordinate gap
/// alone exceeds the best candidate, so near-converged runs cost O(n log n)
/// per query. Result is identical to the exhaustive scan.
/// Throws InvalidInput on an empty history.
WeightVector empirical_weights(HistoryView history, const Eigen::Ref<const Vector>& u);

/// Exhaustive O(n^2) scan with the same tie rule; kept as a reference.
WeightVector empirical_weights_bruteforce(HistoryView history,
                                          const Eigen::Ref<const Vector>& u);

/// sum_k alpha_k j_k and sum_k alpha_k g_k. Throws InvalidInput on a length
/// mismatch.
AggregateEstimate aggregate(HistoryView history, const WeightVector& weights);

/// Estimate of (J(u), grad J(u)) from the stored samples, reweighted at `u`.
AggregateEstimate estimate_at(HistoryView history, const Eigen::Ref<const Vector>& u);

}  // namespace csgopt

#endif  // CSGOPT_HISTORY_HPP
