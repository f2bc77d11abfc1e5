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

// csgopt: runs the benchmark studies and writes plot-ready quantile data.
//
// Exit codes: 0 success, 2 usage error, 1 runtime error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "csgopt/bench/experiment.hpp"
#include "csgopt/error.hpp"

namespace {

using csgopt::bench::ExperimentKind;
using csgopt::bench::ExperimentSpec;

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

ExperimentSpec defaults_for(ExperimentKind kind) {
  ExperimentSpec spec;
  spec.experiment = kind;
  switch (kind) {
    case ExperimentKind::kConstantSteps:
      spec.replicates = 200;
      spec.iters = 500;
      break;
    case ExperimentKind::kStabilityGrid:
      spec.replicates = 50;
      spec.iters = 500;
      break;
    case ExperimentKind::kRosenbrock:
      spec.replicates = 100;
      spec.iters = 2000;
      break;
    case ExperimentKind::kSingleRun:
      spec.replicates = 1;
      spec.iters = 500;
      break;
  }
  return spec;
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::istringstream is(text);
  std::string item;
  while (std::getline(is, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size()) {
      throw csgopt::InvalidInput("bad number '" + item + "' in list '" + text + "'");
    }
    out.push_back(v);
  }
  if (out.empty()) throw csgopt::InvalidInput("empty list");
  return out;
}

std::vector<std::string> split_names(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream is(text);
  std::string item;
  while (std::getline(is, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"csgopt: continuous stochastic gradient benchmark runner"};
  app.footer(
      "Experiments: constant-steps, stability-grid, rosenbrock, single-run.\n"
      "Environment: CSGOPT_THREADS caps the worker pool.\n"
      "Exit codes: 0 success, 2 usage error, 1 runtime error.");

  std::string experiment;
  std::optional<std::size_t> replicates, iters, threads;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out, format, tau_list, tau0_grid, d_grid, optimizer, config,
      problem;
  std::optional<int> max_trials, memory;
  std::optional<double> c1, c2, eta, c_min, c_max, tau0, d;
  bool full_scale = false;
  bool quiet = false;

  app.add_option("experiment", experiment,
                 "constant-steps | stability-grid | rosenbrock | single-run")
      ->required();
  app.add_option("--replicates", replicates, "Independent runs per series");
  app.add_option("--iters", iters, "Iterations per run");
  app.add_option("--seed", seed, "Base seed for the replicate streams");
  app.add_option("--out", out, "Output file (default csgopt_<experiment>.<format>)");
  app.add_option("--format", format, "csv | json")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--tau", tau_list, "Comma-separated constant step sizes (constant-steps)");
  app.add_option("--tau0-grid", tau0_grid, "lo:hi:count, log-spaced (stability-grid)");
  app.add_option("--d-grid", d_grid, "lo:hi:count, linear (stability-grid)");
  app.add_option("--optimizer", optimizer,
                 "Comma-separated subset of csg, bcsg, scibl, sg, adagrad");
  app.add_flag("--full-scale", full_scale, "Use the large-study replicate counts");
  app.add_option("--config", config, "JSON file mirroring the experiment spec");
  app.add_option("--threads", threads, "Worker threads (overrides CSGOPT_THREADS)");
  app.add_option("--problem", problem, "quadratic | bump | rosenbrock (single-run)");
  app.add_option("--tau0", tau0, "Initial step tau0 (single-run)");
  app.add_option("--d", d, "Decay exponent d in eta_n = tau0 / n^d (single-run)");
  app.add_option("--eta", eta, "bCSG initial step (rosenbrock)");
  app.add_option("--c-min", c_min, "Lower clamp for the curvature estimate");
  app.add_option("--c-max", c_max, "Upper clamp for the curvature estimate");
  app.add_option("--T", max_trials, "Maximum line search trials");
  app.add_option("--c1", c1, "Sufficient decrease constant");
  app.add_option("--c2", c2, "Curvature constant");
  app.add_option("--K", memory, "Non-monotone memory length");
  app.add_flag("--quiet", quiet, "Suppress the summary on standard output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  ExperimentSpec spec;
  try {
    spec = defaults_for(csgopt::bench::parse_experiment(experiment));
    if (config) {
      std::ifstream in(*config);
      if (!in) {
        std::cerr << "error: cannot read config '" << *config << "'\n";
        return kExitRuntime;
      }
      nlohmann::json j;
      try {
        j = nlohmann::json::parse(in);
      } catch (const nlohmann::json::exception& e) {
        throw csgopt::InvalidInput(std::string("config is not valid JSON: ") + e.what());
      }
      csgopt::bench::merge_json(spec, j);
      spec.experiment = csgopt::bench::parse_experiment(experiment);
    }
    if (full_scale) spec.apply_full_scale();
    if (replicates) spec.replicates = *replicates;
    if (iters) spec.iters = *iters;
    if (seed) spec.base_seed = *seed;
    if (format) spec.format = csgopt::bench::parse_format(*format);
    if (tau_list) spec.taus = parse_list(*tau_list);
    if (tau0_grid) spec.tau0_grid = csgopt::bench::parse_grid(*tau0_grid, true);
    if (d_grid) spec.d_grid = csgopt::bench::parse_grid(*d_grid, false);
    if (optimizer) spec.optimizers = split_names(*optimizer);
    if (threads) spec.threads = *threads;
    if (problem) spec.problem = *problem;
    if (tau0) spec.tau0 = *tau0;
    if (d) spec.d = *d;
    if (eta) spec.bcsg_eta = *eta;
    if (c_min) spec.c_min = *c_min;
    if (c_max) spec.c_max = *c_max;
    if (max_trials) spec.line_search.max_trials = *max_trials;
    if (c1) spec.line_search.c1 = *c1;
    if (c2) spec.line_search.c2 = *c2;
    if (memory) spec.line_search.memory = *memory;
    if (out) spec.output_path = *out;
    if (spec.output_path.empty()) {
      spec.output_path = "csgopt_" + experiment + "." + csgopt::bench::to_string(spec.format);
    }
    spec.validate();
  } catch (const csgopt::InvalidInput& e) {
    std::cerr << "usage error: " << e.what() << "\n" << "run with --help for the flag list\n";
    return kExitUsage;
  }

  try {
    const auto result = csgopt::bench::run_experiment(spec);
    csgopt::bench::emit_output(result, spec.output_path, spec.format);
    if (!quiet) {
      std::cout << csgopt::bench::format_summary(result) << "wrote " << spec.output_path << "\n";
    }
  } catch (const csgopt::InvalidInput& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitOk;
}
