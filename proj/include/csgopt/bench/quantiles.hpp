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

#ifndef CSGOPT_BENCH_QUANTILES_HPP
#define CSGOPT_BENCH_QUANTILES_HPP

#include <cstddef>
#include <span>
#include <vector>

namespace csgopt::bench {

struct QuantileRow {
  std::size_t iter = 0;
  double median = 0.0;
  double p10 = 0.0;
  double p25 = 0.0;
  double p75 = 0.0;
  double p90 = 0.0;

  bool operator==(const QuantileRow&) const = default;
};

/// Per-iteration quantiles of a metric across replicates.
struct QuantileSummary {
  std::vector<QuantileRow> rows;

  bool operator==(const QuantileSummary&) const = default;
};

/// Order statistic at probability p in [0, 1] with linear interpolation
/// between ranks: h = (n - 1) p, q = x[floor h] + frac(h) (x[ceil h] - x[floor h]).
/// `sorted` must be ascending and nonempty.
double quantile_sorted(std::span<const double> sorted, double p);

/// Column-wise quantiles of a replicates x iterations matrix. Row k of the
/// summary is labelled iters[k] (or k when `iters` is empty). Throws
/// InvalidInput for an empty or ragged matrix.
QuantileSummary quantile_aggregate(const std::vector<std::vector<double>>& metric,
                                   std::span<const std::size_t> iters = {});

}  // namespace csgopt::bench

#endif  // CSGOPT_BENCH_QUANTILES_HPP
