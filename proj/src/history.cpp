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

#include "csgopt/history.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <utility>

#include "csgopt/error.hpp"

namespace csgopt {
namespace {

// Every distance in this file goes through this helper so cached, pruned
// and exhaustive costs agree to the last bit. Swapping a and b leaves the
// result unchanged.
inline double euclidean(const double* a, const double* b, int dim) {
  double sum = 0.0;
  for (int k = 0; k < dim; ++k) {
    const double d = a[k] - b[k];
    sum += d * d;
  }
  return std::sqrt(sum);
}

}  // namespace

HistoryView::HistoryView(const SampleHistory& history) : HistoryView(history, history.size()) {}

HistoryView::HistoryView(const SampleHistory& history, std::size_t count)
    : order_(history.x_order_),
      us_(history.us_.data()),
      xs_(history.xs_.data()),
      gs_(history.gs_.data()),
      js_(history.js_.data()),
      param_distances_(history.param_distances_.empty() ? nullptr
                                                        : history.param_distances_.data()),
      nearest_(history.nearest_.data()),
      count_(count),
      dim_design_(history.dim_design_),
      dim_param_(history.dim_param_) {
  detail::require(count <= history.size(), "history prefix longer than history");
}

SampleHistory::SampleHistory(int dim_design, int dim_param)
    : dim_design_(dim_design), dim_param_(dim_param) {
  detail::require(dim_design > 0 && dim_param > 0, "history dimensions must be positive");
}

void SampleHistory::append(const Eigen::Ref<const Vector>& u, const Eigen::Ref<const Vector>& x,
                           double j, const Eigen::Ref<const Vector>& g) {
  detail::require(u.size() == dim_design_ && g.size() == dim_design_,
                  "sample record: design dimension mismatch");
  detail::require(x.size() == dim_param_, "sample record: parameter dimension mismatch");
  detail::require(std::isfinite(j) && g.allFinite(), "sample record: non-finite j or g");
  us_.insert(us_.end(), u.data(), u.data() + dim_design_);
  xs_.insert(xs_.end(), x.data(), x.data() + dim_param_);
  gs_.insert(gs_.end(), g.data(), g.data() + dim_design_);
  const std::size_t k = js_.size();
  const std::pair<double, std::size_t> key{x[0], k};
  const auto slot = x_order_.insert(std::upper_bound(x_order_.begin(), x_order_.end(), key), key);
  nearest_.push_back(std::numeric_limits<double>::infinity());
  if (dim_param_ == 1) {
    // Sorted neighbours are the nearest ones; computed exactly as the scans do.
    auto link = [this](std::size_t a, std::size_t b) {
      const double d = xs_[a] - xs_[b];
      const double dist = std::sqrt(d * d);
      nearest_[a] = std::min(nearest_[a], dist);
      nearest_[b] = std::min(nearest_[b], dist);
    };
    if (slot != x_order_.begin()) link(k, std::prev(slot)->second);
    if (std::next(slot) != x_order_.end()) link(k, std::next(slot)->second);
  } else {
    const bool cache = k < kParamDistanceCacheLimit;
    if (!cache) {
      param_distances_.clear();
      param_distances_.shrink_to_fit();
    }
    const double* xs = xs_.data();
    const double* xk = xs + k * dim_param_;
    for (std::size_t m = 0; m < k; ++m) {
      const double dist = euclidean(xk, xs + m * dim_param_, dim_param_);
      if (cache) param_distances_.push_back(dist);
      nearest_[k] = std::min(nearest_[k], dist);
      nearest_[m] = std::min(nearest_[m], dist);
    }
  }
  js_.push_back(j);
}

SampleRecord SampleHistory::record(std::size_t k) const {
  detail::require(k < size(), "record index out of range");
  HistoryView view(*this);
  return SampleRecord{view.u(k), view.x(k), view.j(k), view.g(k)};
}

namespace {

void check_query(HistoryView history, const Eigen::Ref<const Vector>& u) {
  detail::require(!history.empty(), "empirical weights need a nonempty history");
  detail::require(u.size() == history.dim_design(), "weight query: dimension mismatch");
}

void design_distances(HistoryView history, const Eigen::Ref<const Vector>& u,
                      std::vector<double>& du) {
  const Vector query = u;
  const int dim = history.dim_design();
  du.resize(history.size());
  for (std::size_t m = 0; m < du.size(); ++m) du[m] = euclidean(query.data(), history.u(m).data(), dim);
}

WeightVector from_votes(const std::vector<std::uint32_t>& votes, std::size_t n) {
  WeightVector w;
  w.alphas.resize(n);
  const double total = static_cast<double>(n);
  for (std::size_t k = 0; k < n; ++k) w.alphas[k] = static_cast<double>(votes[k]) / total;
  return w;
}

// Per-thread buffers reused across calls; the line search queries the same
// history many times per iteration.
struct Scratch {
  std::vector<double> du;
  std::vector<std::pair<double, std::size_t>> order;
  std::vector<double> key;
  std::vector<double> dist;
  std::vector<double> below;
  std::vector<double> above;
  std::vector<std::size_t> pos;
  std::vector<std::size_t> left_arg;
  std::vector<std::size_t> right_arg;
  std::vector<std::uint32_t> votes;
  std::vector<std::size_t> pending;
};

Scratch& scratch() {
  thread_local Scratch s;
  return s;
}

}  // namespace

namespace {

// Fills sc.votes with the vote count of every record. param_distance(i, m)
// must agree bit for bit with euclidean() on x_i and x_m.
template <class ParamDistance>
void cast_votes(HistoryView history, const Eigen::Ref<const Vector>& u, Scratch& sc,
                ParamDistance param_distance) {
  const std::size_t n = history.size();
  design_distances(history, u, sc.du);
  const double* du = sc.du.data();
  const double du_min = *std::min_element(du, du + n);

  // Every other record costs at least du_min + nearest_param_distance(i), and
  // rounding is monotone, so a sample whose own record (cost du_i) beats that
  // bound votes for itself without any search.
  sc.votes.assign(n, 0);
  sc.pending.clear();
  for (std::size_t i = 0; i < n; ++i) {
    if (record_distance(du_min, history.nearest_param_distance(i)) > du[i]) {
      ++sc.votes[i];
    } else {
      sc.pending.push_back(i);
    }
  }
  if (sc.pending.empty()) return;

  // Records sorted by the first parameter coordinate. Since
  // |x_i[0] - x_m[0]| <= ||x_i - x_m||, the cost of record m for sample i is
  // bounded below by du_m + |x_i[0] - x_m[0]|, which splits into
  // key_i + (du_m - key_m) for records left of i and (du_m + key_m) - key_i
  // for records right of it. Prefix and suffix minima of those two arrays
  // bound everything not yet scanned, so each scan ends as soon as no
  // remaining record can beat the best cost.
  std::span<const std::pair<double, std::size_t>> order = history.param_order();
  if (order.size() != n) {
    sc.order.clear();
    for (const auto& entry : order) {
      if (entry.second < n) sc.order.push_back(entry);
    }
    order = sc.order;
  }
  sc.key.resize(n);
  sc.dist.resize(n);
  sc.below.resize(n);
  sc.above.resize(n);
  sc.pos.resize(n);
  double* key = sc.key.data();
  double* dist = sc.dist.data();
  double scale = 0.0;
  for (std::size_t p = 0; p < n; ++p) {
    key[p] = order[p].first;
    dist[p] = du[order[p].second];
    sc.below[p] = dist[p] - key[p];
    sc.above[p] = dist[p] + key[p];
    sc.pos[order[p].second] = p;
    scale = std::max(scale, std::abs(key[p]) + dist[p]);
  }

  // Running argmins of the split bounds, from the left and from the right.
  sc.left_arg.resize(n);
  sc.right_arg.resize(n);
  std::size_t* left_arg = sc.left_arg.data();
  std::size_t* right_arg = sc.right_arg.data();
  for (std::size_t p = 0; p < n; ++p) {
    left_arg[p] = p;
    if (p > 0 && sc.below[left_arg[p - 1]] <= sc.below[p]) left_arg[p] = left_arg[p - 1];
  }
  for (std::size_t p = n; p-- > 0;) {
    right_arg[p] = p;
    if (p + 1 < n && sc.above[right_arg[p + 1]] <= sc.above[p]) right_arg[p] = right_arg[p + 1];
  }

  // The split bounds round differently from the exact cost; the slack makes
  // sure no record whose exact cost ties the best is ever skipped.
  const double slack = 1e-12 * (1.0 + scale);
  for (const std::size_t i : sc.pending) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t best_m = n;
    auto consider = [&](std::size_t q) {
      const std::size_t m = order[q].second;
      const double c = record_distance(du[m], param_distance(i, m));
      if (c < best || (c == best && m < best_m)) {
        best = c;
        best_m = m;
      }
    };
    const std::size_t p = sc.pos[i];
    const double kp = key[p];
    consider(p);
    if (left_arg[p] != p) consider(left_arg[p]);
    if (right_arg[p] != p && right_arg[p] != left_arg[p]) consider(right_arg[p]);
    for (std::size_t q = p; q-- > 0;) {
      if (kp + sc.below[left_arg[q]] > best + slack) break;
      if (kp + sc.below[q] <= best + slack) consider(q);
    }
    for (std::size_t q = p + 1; q < n; ++q) {
      if (sc.above[right_arg[q]] - kp > best + slack) break;
      if (sc.above[q] - kp <= best + slack) consider(q);
    }
    ++sc.votes[best_m];
  }
}

void cast_votes(HistoryView history, const Eigen::Ref<const Vector>& u, Scratch& sc) {
  check_query(history, u);
  const int dim_x = history.dim_param();
  if (dim_x == 1) {
    const double* xs = history.x(0).data();
    cast_votes(history, u, sc, [xs](std::size_t i, std::size_t m) {
      const double d = xs[i] - xs[m];
      return std::sqrt(d * d);
    });
  } else if (const double* cache = history.param_distances()) {
    cast_votes(history, u, sc, [cache](std::size_t i, std::size_t m) {
      if (i == m) return 0.0;
      const std::size_t hi = std::max(i, m);
      return cache[hi * (hi - 1) / 2 + std::min(i, m)];
    });
  } else {
    cast_votes(history, u, sc, [&history, dim_x](std::size_t i, std::size_t m) {
      return euclidean(history.x(i).data(), history.x(m).data(), dim_x);
    });
  }
}

void accumulate(HistoryView history, std::size_t k, double alpha, AggregateEstimate& est) {
  est.j_hat += alpha * history.j(k);
  est.g_hat += alpha * history.g(k);
}

}  // namespace

WeightVector empirical_weights(HistoryView history, const Eigen::Ref<const Vector>& u) {
  Scratch& sc = scratch();
  cast_votes(history, u, sc);
  return from_votes(sc.votes, history.size());
}

WeightVector empirical_weights_bruteforce(HistoryView history,
                                          const Eigen::Ref<const Vector>& u) {
  check_query(history, u);
  const std::size_t n = history.size();
  std::vector<double> du;
  design_distances(history, u, du);
  std::vector<std::uint32_t> votes(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t best_m = 0;
    for (std::size_t m = 0; m < n; ++m) {
      const double c = record_distance(
          du[m], euclidean(history.x(i).data(), history.x(m).data(), history.dim_param()));
      if (c < best) {
        best = c;
        best_m = m;
      }
    }
    ++votes[best_m];
  }
  return from_votes(votes, n);
}

AggregateEstimate aggregate(HistoryView history, const WeightVector& weights) {
  detail::require(weights.size() == history.size(), "aggregate: weight length mismatch");
  AggregateEstimate est;
  est.g_hat = Vector::Zero(history.dim_design());
  for (std::size_t k = 0; k < weights.size(); ++k) {
    const double a = weights.alphas[k];
    if (a == 0.0) continue;
    accumulate(history, k, a, est);
  }
  return est;
}

AggregateEstimate estimate_at(HistoryView history, const Eigen::Ref<const Vector>& u) {
  Scratch& sc = scratch();
  cast_votes(history, u, sc);
  const std::size_t n = history.size();
  const double total = static_cast<double>(n);
  AggregateEstimate est;
  est.g_hat = Vector::Zero(history.dim_design());
  for (std::size_t k = 0; k < n; ++k) {
    if (sc.votes[k] != 0) accumulate(history, k, static_cast<double>(sc.votes[k]) / total, est);
  }
  return est;
}

}  // namespace csgopt
