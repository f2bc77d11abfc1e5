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

#include "csgopt/bench/quantiles.hpp"

#include <algorithm>
#include <cmath>

#include "csgopt/error.hpp"

namespace csgopt::bench {

double quantile_sorted(std::span<const double> sorted, double p) {
  detail::require(!sorted.empty(), "quantile of an empty sample");
  detail::require(p >= 0.0 && p <= 1.0, "quantile probability must lie in [0, 1]");
  const double h = static_cast<double>(sorted.size() - 1) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = h - static_cast<double>(lo);
  if (frac == 0.0) return sorted[lo];
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

QuantileSummary quantile_aggregate(const std::vector<std::vector<double>>& metric,
                                   std::span<const std::size_t> iters) {
  detail::require(!metric.empty() && !metric.front().empty(),
                  "quantile aggregation needs a nonempty matrix");
  const std::size_t cols = metric.front().size();
  for (const auto& row : metric) {
    detail::require(row.size() == cols, "quantile aggregation needs a rectangular matrix");
  }
  detail::require(iters.empty() || iters.size() == cols, "iteration labels do not match columns");

  QuantileSummary summary;
  summary.rows.reserve(cols);
  std::vector<double> column(metric.size());
  for (std::size_t c = 0; c < cols; ++c) {
    for (std::size_t r = 0; r < metric.size(); ++r) column[r] = metric[r][c];
    std::sort(column.begin(), column.end());
    QuantileRow row;
    row.iter = iters.empty() ? c : iters[c];
    row.p10 = quantile_sorted(column, 0.10);
    row.p25 = quantile_sorted(column, 0.25);
    row.median = quantile_sorted(column, 0.50);
    row.p75 = quantile_sorted(column, 0.75);
    row.p90 = quantile_sorted(column, 0.90);
    summary.rows.push_back(row);
  }
  return summary;
}

}  // namespace csgopt::bench
