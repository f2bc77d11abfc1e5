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
#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "csgopt/bench/experiment.hpp"
#include "csgopt/bench/quantiles.hpp"
#include "csgopt/error.hpp"
#include "csgopt/testbed.hpp"

namespace csgopt::bench {
namespace {

TEST(Quantiles, LinearInterpolationExamples) {
  const std::vector<double> v{1.0, 2.0, 3.0, 4.0};
  EXPECT_DOUBLE_EQ(quantile_sorted(v, 0.0), 1.0);
  EXPECT_DOUBLE_EQ(quantile_sorted(v, 1.0), 4.0);
  EXPECT_DOUBLE_EQ(quantile_sorted(v, 0.5), 2.5);
  EXPECT_DOUBLE_EQ(quantile_sorted(v, 0.25), 1.75);
  const std::vector<double> single{7.0};
  EXPECT_DOUBLE_EQ(quantile_sorted(single, 0.9), 7.0);
  EXPECT_THROW(quantile_sorted(std::vector<double>{}, 0.5), InvalidInput);
  EXPECT_THROW(quantile_sorted(v, 1.5), InvalidInput);
}

TEST(Quantiles, ColumnsAreOrderedAndLabelled) {
  std::mt19937_64 gen(3);
  std::normal_distribution<double> normal;
  std::vector<std::vector<double>> metric(41, std::vector<double>(6));
  for (auto& row : metric) {
    for (double& x : row) x = normal(gen);
  }
  const std::vector<std::size_t> iters{0, 10, 20, 30, 40, 50};
  const QuantileSummary s = quantile_aggregate(metric, iters);
  ASSERT_EQ(s.rows.size(), 6u);
  for (std::size_t c = 0; c < 6; ++c) {
    const QuantileRow& r = s.rows[c];
    EXPECT_EQ(r.iter, iters[c]);
    EXPECT_LE(r.p10, r.p25);
    EXPECT_LE(r.p25, r.median);
    EXPECT_LE(r.median, r.p75);
    EXPECT_LE(r.p75, r.p90);
    // 41 rows put the median exactly on the 21st order statistic
    std::vector<double> col;
    for (const auto& row : metric) col.push_back(row[c]);
    std::nth_element(col.begin(), col.begin() + 20, col.end());
    EXPECT_EQ(r.median, col[20]);
  }
}

TEST(Quantiles, InvariantUnderReplicatePermutation) {
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> u;
  std::vector<std::vector<double>> metric(25, std::vector<double>(4));
  for (auto& row : metric) {
    for (double& x : row) x = u(gen);
  }
  const QuantileSummary before = quantile_aggregate(metric);
  std::shuffle(metric.begin(), metric.end(), gen);
  EXPECT_EQ(quantile_aggregate(metric), before);
}

TEST(Quantiles, RejectsRaggedOrEmpty) {
  EXPECT_THROW(quantile_aggregate({}), InvalidInput);
  EXPECT_THROW(quantile_aggregate({{1.0, 2.0}, {1.0}}), InvalidInput);
  const std::vector<std::size_t> iters{1};
  EXPECT_THROW(quantile_aggregate({{1.0, 2.0}}, iters), InvalidInput);
}

TEST(Csv, HeaderOnlyAndOneRow) {
  EXPECT_EQ(to_csv({}), "iter,median,p10,p25,p75,p90,series\n");
  Series s;
  s.name = "csg/tau=0.1";
  s.summary.rows.push_back({3, 0.5, 0.1, 0.25, 0.75, 0.9});
  EXPECT_EQ(to_csv({s}),
            "iter,median,p10,p25,p75,p90,series\n3,0.5,0.10000000000000001,0.25,0.75,"
            "0.90000000000000002,csg/tau=0.1\n");
}

TEST(Json, SeriesRoundTripIsExact) {
  ExperimentResult result;
  Series s;
  s.name = "bcsg";
  s.summary.rows.push_back({0, 1.0 / 3.0, 1e-300, 0.1, 2.0 / 3.0, 12345.678901234567});
  s.summary.rows.push_back({1, 0.0, -0.0, 5e-324, 1.0, 2.0});
  s.stats["median_final"] = 0.1 + 0.2;
  result.series.push_back(s);
  result.stats["x"] = 1.0;
  const nlohmann::json parsed = nlohmann::json::parse(to_json(result).dump(2));
  const std::vector<Series> back = series_from_json(parsed);
  ASSERT_EQ(back.size(), 1u);
  EXPECT_EQ(back[0].name, "bcsg");
  EXPECT_EQ(back[0].summary, s.summary);
  EXPECT_EQ(back[0].stats, s.stats);
  EXPECT_EQ(parsed.at("library"), "csgopt");
}

TEST(Spec, JsonMergeRoundTrip) {
  ExperimentSpec spec;
  spec.experiment = ExperimentKind::kStabilityGrid;
  spec.replicates = 17;
  spec.taus = {0.5, 0.25};
  spec.tau0_grid = {0.01, 1.0, 3, true};
  spec.line_search.max_trials = 9;
  spec.c_max = 1e6;
  ExperimentSpec copy;
  merge_json(copy, to_json(spec));
  EXPECT_EQ(to_json(copy), to_json(spec));
  EXPECT_THROW(merge_json(copy, nlohmann::json{{"replicates", "many"}}), InvalidInput);
}

TEST(Grid, ParseAndValues) {
  const GridSpec lin = parse_grid("0:1:5", false);
  EXPECT_EQ(lin.values(), (std::vector<double>{0.0, 0.25, 0.5, 0.75, 1.0}));
  const GridSpec log = parse_grid("1e-3:10:5", true);
  const std::vector<double> v = log.values();
  ASSERT_EQ(v.size(), 5u);
  EXPECT_EQ(v.front(), 1e-3);
  EXPECT_EQ(v.back(), 10.0);
  EXPECT_NEAR(v[2], 0.1, 1e-15);
  EXPECT_EQ(parse_grid("2:2:1", false).values(), std::vector<double>{2.0});
  EXPECT_THROW(parse_grid("1:2", false), InvalidInput);
  EXPECT_THROW(parse_grid("1:2:x", false), InvalidInput);
  EXPECT_THROW(parse_grid("2:1:3", false), InvalidInput);
  EXPECT_THROW(parse_grid("0:1:3", true), InvalidInput);
  EXPECT_THROW(parse_grid("0:1:0", false), InvalidInput);
}

TEST(Names, ParseAndPrint) {
  for (auto kind : {ExperimentKind::kConstantSteps, ExperimentKind::kStabilityGrid,
                    ExperimentKind::kRosenbrock, ExperimentKind::kSingleRun}) {
    EXPECT_EQ(parse_experiment(to_string(kind)), kind);
  }
  EXPECT_THROW(parse_experiment("nope"), InvalidInput);
  EXPECT_EQ(parse_format("json"), OutputFormat::kJson);
  EXPECT_THROW(parse_format("xml"), InvalidInput);
}

TEST(Replicates, IdenticalAcrossThreadCounts) {
  BumpProblem5D problem;
  ReplicateConfig cfg;
  cfg.replicates = 6;
  cfg.iters = 40;
  cfg.base_seed = 77;
  const OptimizerSpec spec = CsgBacktracking{PowerDecayStep{1.0, 0.5}, {}};
  cfg.threads = 1;
  const auto serial = run_replicates(problem, spec, cfg);
  cfg.threads = 4;
  const auto parallel = run_replicates(problem, spec, cfg);
  ASSERT_EQ(serial.size(), parallel.size());
  for (std::size_t r = 0; r < serial.size(); ++r) {
    EXPECT_EQ(serial[r].final_u, parallel[r].final_u);
    EXPECT_EQ(serial[r].total_refinements, parallel[r].total_refinements);
  }
  EXPECT_NE(serial[0].initial_u, serial[1].initial_u);
}

TEST(Replicates, ZeroStepKeepsEveryRunAtItsStart) {
  QuadraticProblem1D problem;
  ReplicateConfig cfg;
  cfg.replicates = 5;
  cfg.iters = 30;
  cfg.base_seed = 4;
  const auto traces = run_replicates(problem, CsgConstant{0.0}, cfg);
  for (std::size_t r = 0; r < traces.size(); ++r) {
    EXPECT_EQ(traces[r].final_u, replicate_start(problem, 4, r));
    EXPECT_TRUE(problem.feasible_set().contains(traces[r].initial_u));
  }
  const auto errors = error_matrix(traces);
  EXPECT_EQ(errors[0].size(), 31u);
  EXPECT_EQ(errors[2].front(), errors[2].back());
}

TEST(ParallelFor, PropagatesFirstException) {
  EXPECT_THROW(parallel_for(8, 3,
                            [](std::size_t i) {
                              if (i == 5) throw IoError("boom");
                            }),
               IoError);
}

TEST(ResolveThreads, ExplicitThenEnvironment) {
  EXPECT_EQ(resolve_threads(3), 3u);
  setenv("CSGOPT_THREADS", "5", 1);
  EXPECT_EQ(resolve_threads(0), 5u);
  setenv("CSGOPT_THREADS", "junk", 1);
  EXPECT_GE(resolve_threads(0), 1u);
  unsetenv("CSGOPT_THREADS");
}

ExperimentSpec small_constant_steps() {
  ExperimentSpec spec;
  spec.experiment = ExperimentKind::kConstantSteps;
  spec.replicates = 4;
  spec.iters = 20;
  spec.taus = {0.1, 1.0};
  return spec;
}

TEST(Experiment, SmallRunIsDeterministicAcrossThreads) {
  ExperimentSpec spec = small_constant_steps();
  spec.threads = 1;
  const std::string a = to_csv(run_experiment(spec).series);
  spec.threads = 3;
  const std::string b = to_csv(run_experiment(spec).series);
  EXPECT_EQ(a, b);
  // header plus 21 rows per series, two optimizers by two steps
  EXPECT_EQ(std::count(a.begin(), a.end(), '\n'), 1 + 4 * 21);
}

TEST(Experiment, EmitOutputWritesAndFailsCleanly) {
  const ExperimentResult result = run_experiment(small_constant_steps());
  const auto dir = std::filesystem::temp_directory_path() / "csgopt_bench_test";
  std::filesystem::create_directories(dir);
  const auto path = (dir / "out.json").string();
  emit_output(result, path, OutputFormat::kJson);
  std::ifstream in(path);
  const nlohmann::json j = nlohmann::json::parse(in);
  EXPECT_EQ(series_from_json(j).size(), result.series.size());
  EXPECT_THROW(emit_output(result, (dir / "missing" / "x.csv").string(), OutputFormat::kCsv),
               IoError);
  std::filesystem::remove_all(dir);
}

TEST(Experiment, ValidateRejectsNonsense) {
  ExperimentSpec spec = small_constant_steps();
  spec.replicates = 0;
  EXPECT_THROW(run_experiment(spec), InvalidInput);
  spec = small_constant_steps();
  spec.optimizers = {"scibl"};
  EXPECT_THROW(run_experiment(spec), InvalidInput);
}

}  // namespace
}  // namespace csgopt::bench
