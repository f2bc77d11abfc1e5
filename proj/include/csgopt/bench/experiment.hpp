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

#ifndef CSGOPT_BENCH_EXPERIMENT_HPP
#define CSGOPT_BENCH_EXPERIMENT_HPP

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "csgopt/bench/quantiles.hpp"
#include "csgopt/optimizers.hpp"
#include "csgopt/problem.hpp"

namespace csgopt::bench {

inline constexpr const char* kLibraryVersion = "0.1.0";

enum class ExperimentKind { kConstantSteps, kStabilityGrid, kRosenbrock, kSingleRun };
enum class OutputFormat { kCsv, kJson };

std::string to_string(ExperimentKind kind);
ExperimentKind parse_experiment(const std::string& name);
std::string to_string(OutputFormat format);
OutputFormat parse_format(const std::string& name);

/// lo:hi:count, log-spaced or linear.
struct GridSpec {
  double lo = 0.0;
  double hi = 1.0;
  int count = 1;
  bool log_spaced = false;

  std::vector<double> values() const;
};

/// Parses "lo:hi:count". Throws InvalidInput on malformed text.
GridSpec parse_grid(const std::string& text, bool log_spaced);

/// Declarative description of a replicate sweep.
struct ExperimentSpec {
  ExperimentKind experiment = ExperimentKind::kConstantSteps;
  std::size_t replicates = 200;
  std::size_t iters = 500;
  std::uint64_t base_seed = 20220101;

  // constant-steps
  std::vector<double> taus{0.01, 0.1, 1.0, 1.9, 1.99};
  // stability-grid
  GridSpec tau0_grid{1e-3, 1e1, 11, true};
  GridSpec d_grid{0.0, 1.0, 11, false};
  // Optimizers to include; empty selects the experiment's default set.
  std::vector<std::string> optimizers;

  LineSearchConfig line_search;
  double bcsg_eta = 1.0 / 40.0;
  double c_min = 1e-8;
  double c_max = 1e8;
  double adagrad_tau0 = 0.1;
  double adagrad_d = 0.5;
  double adagrad_eps = 1e-8;

  // single-run
  std::string problem = "quadratic";
  double tau0 = 0.1;
  double d = 0.0;

  std::string output_path;
  OutputFormat format = OutputFormat::kCsv;
  /// Worker threads; 0 means CSGOPT_THREADS or the hardware concurrency.
  std::size_t threads = 0;

  /// Raises replicate counts to the large-study sizes.
  void apply_full_scale();
  /// Throws InvalidInput on an inconsistent spec.
  void validate() const;
};

nlohmann::json to_json(const ExperimentSpec& spec);
/// Overlays the keys present in `j` onto `spec`.
void merge_json(ExperimentSpec& spec, const nlohmann::json& j);

struct Series {
  std::string name;
  QuantileSummary summary;
  std::map<std::string, double> stats;
};

struct ExperimentResult {
  ExperimentSpec spec;
  std::vector<Series> series;
  std::map<std::string, double> stats;
};

// Replicates -------------------------------------------------------------------

/// Worker count: `requested` if nonzero, else CSGOPT_THREADS, else the
/// hardware concurrency (at least one).
std::size_t resolve_threads(std::size_t requested);

/// Runs body(i) for i in [0, count) on a pool of `threads` workers. The first
/// exception thrown by any task is rethrown after all workers join.
void parallel_for(std::size_t count, std::size_t threads,
                  const std::function<void(std::size_t)>& body);

struct ReplicateConfig {
  std::size_t replicates = 1;
  std::size_t iters = 500;
  std::uint64_t base_seed = 0;
  std::size_t threads = 1;
  bool record_oracle = true;
};

/// Start point of replicate r: uniform on U from the (seed, r, start) stream.
DesignPoint replicate_start(const StochasticProblem& problem, std::uint64_t base_seed,
                            std::size_t replicate);

/// One run per replicate. Replicate r starts at replicate_start(r) and draws
/// samples from the (seed, r, samples) stream, so different optimizers see
/// matched starts and sample sequences. Output order is replicate order.
std::vector<IterateTrace> run_replicates(const StochasticProblem& problem,
                                         const OptimizerSpec& spec, const ReplicateConfig& cfg);

/// Replicates x (iters + 1) matrix of ||u_k - u*||, k = 0..iters, where u_k is
/// the iterate after k steps.
std::vector<std::vector<double>> error_matrix(const std::vector<IterateTrace>& traces);

/// Replicates x iters matrix of the objective estimates j_hat, for problems
/// without a known minimizer.
std::vector<std::vector<double>> estimate_matrix(const std::vector<IterateTrace>& traces);

// Experiments --------------------------------------------------------------------

/// Runs the sweep described by `spec` and returns per-series summaries.
ExperimentResult run_experiment(const ExperimentSpec& spec);

/// Human-readable one-line-per-series summary.
std::string format_summary(const ExperimentResult& result);

// Output --------------------------------------------------------------------------

/// CSV: header iter,median,p10,p25,p75,p90,series then one row per summary
/// row per series; values printed with 17 significant digits.
std::string to_csv(const std::vector<Series>& series);
nlohmann::json to_json(const ExperimentResult& result);
/// Inverse of to_json for the series part.
std::vector<Series> series_from_json(const nlohmann::json& j);

/// Writes the result to spec.output_path in spec.format. Throws IoError with
/// the path on failure.
void emit_output(const ExperimentResult& result, const std::string& path, OutputFormat format);

}  // namespace csgopt::bench

#endif  // CSGOPT_BENCH_EXPERIMENT_HPP
