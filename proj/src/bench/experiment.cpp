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

#include "csgopt/bench/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

#include "csgopt/error.hpp"
#include "csgopt/rng.hpp"
#include "csgopt/testbed.hpp"

namespace csgopt::bench {

// Names ------------------------------------------------------------------------

std::string to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::kConstantSteps: return "constant-steps";
    case ExperimentKind::kStabilityGrid: return "stability-grid";
    case ExperimentKind::kRosenbrock: return "rosenbrock";
    case ExperimentKind::kSingleRun: return "single-run";
  }
  return "unknown";
}

ExperimentKind parse_experiment(const std::string& name) {
  for (auto kind : {ExperimentKind::kConstantSteps, ExperimentKind::kStabilityGrid,
                    ExperimentKind::kRosenbrock, ExperimentKind::kSingleRun}) {
    if (to_string(kind) == name) return kind;
  }
  throw InvalidInput("unknown experiment '" + name + "'");
}

std::string to_string(OutputFormat format) {
  return format == OutputFormat::kCsv ? "csv" : "json";
}

OutputFormat parse_format(const std::string& name) {
  if (name == "csv") return OutputFormat::kCsv;
  if (name == "json") return OutputFormat::kJson;
  throw InvalidInput("unknown output format '" + name + "'");
}

// Grids --------------------------------------------------------------------------

std::vector<double> GridSpec::values() const {
  detail::require(count >= 1, "grid needs at least one point");
  if (count == 1) return {lo};
  std::vector<double> out(static_cast<std::size_t>(count));
  for (int k = 0; k < count; ++k) {
    const double t = static_cast<double>(k) / (count - 1);
    out[k] = log_spaced ? std::pow(10.0, std::log10(lo) + t * (std::log10(hi) - std::log10(lo)))
                        : lo + t * (hi - lo);
  }
  out.back() = hi;
  out.front() = lo;
  return out;
}

GridSpec parse_grid(const std::string& text, bool log_spaced) {
  GridSpec grid;
  grid.log_spaced = log_spaced;
  std::istringstream is(text);
  std::string lo, hi, count;
  if (!std::getline(is, lo, ':') || !std::getline(is, hi, ':') || !std::getline(is, count)) {
    throw InvalidInput("grid must be lo:hi:count, got '" + text + "'");
  }
  try {
    std::size_t used_lo = 0, used_hi = 0, used_count = 0;
    grid.lo = std::stod(lo, &used_lo);
    grid.hi = std::stod(hi, &used_hi);
    grid.count = std::stoi(count, &used_count);
    if (used_lo != lo.size() || used_hi != hi.size() || used_count != count.size()) {
      throw std::invalid_argument("trailing characters");
    }
  } catch (const std::exception&) {
    throw InvalidInput("grid must be lo:hi:count, got '" + text + "'");
  }
  detail::require(grid.count >= 1, "grid count must be positive");
  detail::require(grid.lo <= grid.hi, "grid needs lo <= hi");
  detail::require(!log_spaced || grid.lo > 0.0, "log-spaced grid needs lo > 0");
  return grid;
}

// Spec ------------------------------------------------------------------------------

void ExperimentSpec::apply_full_scale() {
  switch (experiment) {
    case ExperimentKind::kConstantSteps: replicates = 2000; break;
    case ExperimentKind::kStabilityGrid: replicates = 1200; iters = 500; break;
    case ExperimentKind::kRosenbrock: replicates = 5000; break;
    case ExperimentKind::kSingleRun: break;
  }
}

namespace {

std::vector<std::string> default_optimizers(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::kConstantSteps: return {"csg", "sg"};
    case ExperimentKind::kStabilityGrid: return {"bcsg", "adagrad"};
    case ExperimentKind::kRosenbrock: return {"adagrad", "bcsg", "scibl"};
    case ExperimentKind::kSingleRun: return {"csg"};
  }
  return {};
}

std::vector<std::string> allowed_optimizers(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::kConstantSteps: return {"csg", "sg"};
    case ExperimentKind::kStabilityGrid: return {"bcsg", "adagrad"};
    default: return {"csg", "bcsg", "scibl", "sg", "adagrad"};
  }
}

std::vector<std::string> selected_optimizers(const ExperimentSpec& spec) {
  return spec.optimizers.empty() ? default_optimizers(spec.experiment) : spec.optimizers;
}

}  // namespace

void ExperimentSpec::validate() const {
  detail::require(replicates >= 1, "replicates must be at least 1");
  detail::require(iters >= 1, "iters must be at least 1");
  line_search.validate();
  const auto allowed = allowed_optimizers(experiment);
  for (const auto& name : selected_optimizers(*this)) {
    detail::require(std::find(allowed.begin(), allowed.end(), name) != allowed.end(),
                    ("optimizer '" + name + "' is not available for " + to_string(experiment))
                        .c_str());
  }
  switch (experiment) {
    case ExperimentKind::kConstantSteps:
      detail::require(!taus.empty(), "constant-steps needs at least one step size");
      for (double t : taus) detail::require(std::isfinite(t) && t >= 0.0, "step sizes must be >= 0");
      break;
    case ExperimentKind::kStabilityGrid:
      detail::require(tau0_grid.count >= 1 && d_grid.count >= 1, "grids must be nonempty");
      detail::require(tau0_grid.lo > 0.0, "tau0 grid must be positive");
      detail::require(d_grid.lo >= 0.0 && d_grid.hi <= 1.0, "d grid must lie in [0, 1]");
      break;
    case ExperimentKind::kRosenbrock:
      detail::require(bcsg_eta > 0.0, "bcsg eta must be positive");
      detail::require(c_min > 0.0 && c_min < c_max, "need 0 < c_min < c_max");
      break;
    case ExperimentKind::kSingleRun:
      detail::require(selected_optimizers(*this).size() == 1,
                      "single-run takes exactly one optimizer");
      make_problem(problem);
      detail::require(tau0 >= 0.0 && d >= 0.0 && d <= 1.0, "need tau0 >= 0, d in [0, 1]");
      break;
  }
}

nlohmann::json to_json(const ExperimentSpec& spec) {
  nlohmann::json j;
  j["experiment"] = to_string(spec.experiment);
  j["replicates"] = spec.replicates;
  j["iters"] = spec.iters;
  j["seed"] = spec.base_seed;
  j["taus"] = spec.taus;
  j["tau0_grid"] = {{"lo", spec.tau0_grid.lo}, {"hi", spec.tau0_grid.hi},
                    {"count", spec.tau0_grid.count}};
  j["d_grid"] = {{"lo", spec.d_grid.lo}, {"hi", spec.d_grid.hi}, {"count", spec.d_grid.count}};
  j["optimizers"] = selected_optimizers(spec);
  j["line_search"] = {{"T", spec.line_search.max_trials},
                      {"c1", spec.line_search.c1},
                      {"c2", spec.line_search.c2},
                      {"K", spec.line_search.memory}};
  j["bcsg_eta"] = spec.bcsg_eta;
  j["c_min"] = spec.c_min;
  j["c_max"] = spec.c_max;
  j["adagrad"] = {{"tau0", spec.adagrad_tau0}, {"d", spec.adagrad_d}, {"eps", spec.adagrad_eps}};
  j["problem"] = spec.problem;
  j["tau0"] = spec.tau0;
  j["d"] = spec.d;
  j["format"] = to_string(spec.format);
  return j;
}

void merge_json(ExperimentSpec& spec, const nlohmann::json& j) {
  try {
    if (j.contains("experiment")) spec.experiment = parse_experiment(j.at("experiment"));
    if (j.contains("replicates")) spec.replicates = j.at("replicates").get<std::size_t>();
    if (j.contains("iters")) spec.iters = j.at("iters").get<std::size_t>();
    if (j.contains("seed")) spec.base_seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("taus")) spec.taus = j.at("taus").get<std::vector<double>>();
    auto grid = [](GridSpec& g, const nlohmann::json& jg) {
      if (jg.contains("lo")) g.lo = jg.at("lo").get<double>();
      if (jg.contains("hi")) g.hi = jg.at("hi").get<double>();
      if (jg.contains("count")) g.count = jg.at("count").get<int>();
    };
    if (j.contains("tau0_grid")) grid(spec.tau0_grid, j.at("tau0_grid"));
    if (j.contains("d_grid")) grid(spec.d_grid, j.at("d_grid"));
    if (j.contains("optimizers")) spec.optimizers = j.at("optimizers").get<std::vector<std::string>>();
    if (j.contains("line_search")) {
      const auto& ls = j.at("line_search");
      if (ls.contains("T")) spec.line_search.max_trials = ls.at("T").get<int>();
      if (ls.contains("c1")) spec.line_search.c1 = ls.at("c1").get<double>();
      if (ls.contains("c2")) spec.line_search.c2 = ls.at("c2").get<double>();
      if (ls.contains("K")) spec.line_search.memory = ls.at("K").get<int>();
    }
    if (j.contains("bcsg_eta")) spec.bcsg_eta = j.at("bcsg_eta").get<double>();
    if (j.contains("c_min")) spec.c_min = j.at("c_min").get<double>();
    if (j.contains("c_max")) spec.c_max = j.at("c_max").get<double>();
    if (j.contains("adagrad")) {
      const auto& a = j.at("adagrad");
      if (a.contains("tau0")) spec.adagrad_tau0 = a.at("tau0").get<double>();
      if (a.contains("d")) spec.adagrad_d = a.at("d").get<double>();
      if (a.contains("eps")) spec.adagrad_eps = a.at("eps").get<double>();
    }
    if (j.contains("problem")) spec.problem = j.at("problem").get<std::string>();
    if (j.contains("tau0")) spec.tau0 = j.at("tau0").get<double>();
    if (j.contains("d")) spec.d = j.at("d").get<double>();
    if (j.contains("format")) spec.format = parse_format(j.at("format"));
    if (j.contains("out")) spec.output_path = j.at("out").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput(std::string("bad experiment config: ") + e.what());
  }
}

// Replicates ---------------------------------------------------------------------

std::size_t resolve_threads(std::size_t requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("CSGOPT_THREADS")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(std::size_t count, std::size_t threads,
                  const std::function<void(std::size_t)>& body) {
  threads = std::max<std::size_t>(1, std::min(threads, count));
  if (threads == 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  {
    std::vector<std::jthread> workers;
    workers.reserve(threads);
    for (std::size_t w = 0; w < threads; ++w) {
      workers.emplace_back([&] {
        for (std::size_t i = next++; i < count; i = next++) {
          try {
            body(i);
          } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
            next = count;
          }
        }
      });
    }
  }
  if (failure) std::rethrow_exception(failure);
}

DesignPoint replicate_start(const StochasticProblem& problem, std::uint64_t base_seed,
                            std::size_t replicate) {
  Rng rng = Rng::split(base_seed, replicate, StreamPurpose::kStartPoint);
  return problem.feasible_set().sample_uniform(rng);
}

std::vector<IterateTrace> run_replicates(const StochasticProblem& problem,
                                         const OptimizerSpec& spec, const ReplicateConfig& cfg) {
  validate(spec);
  std::vector<IterateTrace> traces(cfg.replicates);
  parallel_for(cfg.replicates, cfg.threads, [&](std::size_t r) {
    RunConfig run_cfg;
    run_cfg.max_iters = cfg.iters;
    run_cfg.seed = Rng::derive_seed(cfg.base_seed, r, StreamPurpose::kSamples);
    run_cfg.record_oracle = cfg.record_oracle;
    traces[r] = run(problem, spec, run_cfg, replicate_start(problem, cfg.base_seed, r));
  });
  return traces;
}

std::vector<std::vector<double>> error_matrix(const std::vector<IterateTrace>& traces) {
  std::vector<std::vector<double>> metric;
  metric.reserve(traces.size());
  for (const auto& trace : traces) {
    detail::require(trace.final_error.has_value(), "error matrix needs a known minimizer");
    std::vector<double> row;
    row.reserve(trace.rows.size() + 1);
    for (const auto& r : trace.rows) {
      detail::require(r.error.has_value(), "error matrix needs oracle rows");
      row.push_back(*r.error);
    }
    row.push_back(*trace.final_error);
    metric.push_back(std::move(row));
  }
  return metric;
}

std::vector<std::vector<double>> estimate_matrix(const std::vector<IterateTrace>& traces) {
  std::vector<std::vector<double>> metric;
  metric.reserve(traces.size());
  for (const auto& trace : traces) {
    std::vector<double> row;
    for (const auto& r : trace.rows) row.push_back(r.j_hat);
    metric.push_back(std::move(row));
  }
  return metric;
}

// Experiments ----------------------------------------------------------------------

namespace {

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string short_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

OptimizerSpec make_spec(const std::string& name, const StepSchedule& schedule,
                        const ExperimentSpec& spec) {
  if (name == "csg") {
    return CsgConstant{schedule_value(schedule, 1)};
  }
  if (name == "bcsg") return CsgBacktracking{schedule, spec.line_search};
  if (name == "scibl") return Scibl{spec.c_min, spec.c_max, spec.line_search};
  if (name == "sg") return Sg{schedule};
  if (name == "adagrad") return AdaGrad{schedule, spec.adagrad_eps};
  throw InvalidInput("unknown optimizer '" + name + "'");
}

double median_of(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  return quantile_sorted(values, 0.5);
}

/// Runs the replicates of one series and summarises them over all iterations
/// (or only the final one).
Series run_series(const std::string& name, const StochasticProblem& problem,
                  const OptimizerSpec& opt, const ExperimentSpec& spec, std::size_t threads,
                  bool final_only) {
  ReplicateConfig cfg;
  cfg.replicates = spec.replicates;
  cfg.iters = spec.iters;
  cfg.base_seed = spec.base_seed;
  cfg.threads = threads;
  const auto traces = run_replicates(problem, opt, cfg);

  const bool has_minimizer = problem.known_minimizer().has_value();
  auto metric = has_minimizer ? error_matrix(traces) : estimate_matrix(traces);
  std::vector<std::size_t> iters(metric.front().size());
  for (std::size_t k = 0; k < iters.size(); ++k) iters[k] = has_minimizer ? k : k + 1;
  if (final_only) {
    for (auto& row : metric) row = {row.back()};
    iters = {iters.back()};
  }

  Series series;
  series.name = name;
  series.summary = quantile_aggregate(metric, iters);
  std::vector<double> finals;
  double refinements = 0.0;
  for (std::size_t r = 0; r < traces.size(); ++r) {
    finals.push_back(metric[r].back());
    refinements += static_cast<double>(traces[r].total_refinements);
  }
  series.stats["median_final"] = median_of(finals);
  series.stats["total_refinements"] = refinements;
  return series;
}

void add_spread(ExperimentResult& result, const std::string& optimizer) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  const std::string prefix = optimizer + "/";
  for (const auto& s : result.series) {
    if (s.name.rfind(prefix, 0) != 0) continue;
    lo = std::min(lo, s.stats.at("median_final"));
    hi = std::max(hi, s.stats.at("median_final"));
  }
  if (hi == 0.0 && lo == 0.0) {
    result.stats[optimizer + ".spread"] = 1.0;
  } else {
    result.stats[optimizer + ".spread"] =
        lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity();
  }
}

}  // namespace

ExperimentResult run_experiment(const ExperimentSpec& spec) {
  spec.validate();
  const std::size_t threads = resolve_threads(spec.threads);
  ExperimentResult result;
  result.spec = spec;
  const auto optimizers = selected_optimizers(spec);

  switch (spec.experiment) {
    case ExperimentKind::kConstantSteps: {
      QuadraticProblem1D problem;
      for (const auto& name : optimizers) {
        for (double tau : spec.taus) {
          const OptimizerSpec opt = make_spec(name, ConstantStep{tau}, spec);
          result.series.push_back(run_series(name + "/tau=" + short_number(tau), problem, opt,
                                             spec, threads, false));
        }
      }
      break;
    }
    case ExperimentKind::kStabilityGrid: {
      BumpProblem5D problem;
      for (const auto& name : optimizers) {
        for (double tau0 : spec.tau0_grid.values()) {
          for (double d : spec.d_grid.values()) {
            const OptimizerSpec opt = make_spec(name, PowerDecayStep{tau0, d}, spec);
            result.series.push_back(run_series(
                name + "/tau0=" + short_number(tau0) + "/d=" + short_number(d), problem, opt,
                spec, threads, true));
          }
        }
        add_spread(result, name);
      }
      break;
    }
    case ExperimentKind::kRosenbrock: {
      NoisyRosenbrock problem;
      for (const auto& name : optimizers) {
        StepSchedule schedule = ConstantStep{spec.bcsg_eta};
        if (name == "adagrad" || name == "sg") {
          schedule = PowerDecayStep{spec.adagrad_tau0, spec.adagrad_d};
        }
        result.series.push_back(
            run_series(name, problem, make_spec(name, schedule, spec), spec, threads, false));
      }
      const auto find = [&](const std::string& n) -> const Series* {
        for (const auto& s : result.series) {
          if (s.name == n) return &s;
        }
        return nullptr;
      };
      const Series* bcsg = find("bcsg");
      const Series* scibl = find("scibl");
      if (bcsg && scibl && scibl->stats.at("total_refinements") > 0.0) {
        result.stats["refinement_ratio_bcsg_over_scibl"] =
            bcsg->stats.at("total_refinements") / scibl->stats.at("total_refinements");
      }
      break;
    }
    case ExperimentKind::kSingleRun: {
      const auto problem = make_problem(spec.problem);
      const std::string& name = optimizers.front();
      StepSchedule schedule = ConstantStep{spec.tau0};
      if (spec.d > 0.0) schedule = PowerDecayStep{spec.tau0, spec.d};
      result.series.push_back(
          run_series(name, *problem, make_spec(name, schedule, spec), spec, threads, false));
      break;
    }
  }
  return result;
}

std::string format_summary(const ExperimentResult& result) {
  std::ostringstream os;
  os << "experiment " << to_string(result.spec.experiment) << ": " << result.spec.replicates
     << " replicates x " << result.spec.iters << " iterations, seed " << result.spec.base_seed
     << "\n";
  for (const auto& s : result.series) {
    os << "  " << s.name;
    for (const auto& [key, value] : s.stats) os << "  " << key << "=" << short_number(value);
    os << "\n";
  }
  for (const auto& [key, value] : result.stats) {
    os << "  " << key << " = " << short_number(value) << "\n";
  }
  return os.str();
}

// Output ----------------------------------------------------------------------------

std::string to_csv(const std::vector<Series>& series) {
  std::ostringstream os;
  os << "iter,median,p10,p25,p75,p90,series\n";
  for (const auto& s : series) {
    for (const auto& row : s.summary.rows) {
      os << row.iter << ',' << format_number(row.median) << ',' << format_number(row.p10) << ','
         << format_number(row.p25) << ',' << format_number(row.p75) << ','
         << format_number(row.p90) << ',' << s.name << '\n';
    }
  }
  return os.str();
}

nlohmann::json to_json(const ExperimentResult& result) {
  nlohmann::json j;
  j["library"] = "csgopt";
  j["version"] = kLibraryVersion;
  j["experiment"] = to_string(result.spec.experiment);
  j["seed"] = result.spec.base_seed;
  j["spec"] = to_json(result.spec);
  j["stats"] = result.stats;
  j["series"] = nlohmann::json::array();
  for (const auto& s : result.series) {
    nlohmann::json js;
    js["name"] = s.name;
    js["stats"] = s.stats;
    js["rows"] = nlohmann::json::array();
    for (const auto& row : s.summary.rows) {
      js["rows"].push_back({{"iter", row.iter},
                            {"median", row.median},
                            {"p10", row.p10},
                            {"p25", row.p25},
                            {"p75", row.p75},
                            {"p90", row.p90}});
    }
    j["series"].push_back(std::move(js));
  }
  return j;
}

std::vector<Series> series_from_json(const nlohmann::json& j) {
  std::vector<Series> out;
  for (const auto& js : j.at("series")) {
    Series s;
    s.name = js.at("name").get<std::string>();
    s.stats = js.at("stats").get<std::map<std::string, double>>();
    for (const auto& jr : js.at("rows")) {
      QuantileRow row;
      row.iter = jr.at("iter").get<std::size_t>();
      row.median = jr.at("median").get<double>();
      row.p10 = jr.at("p10").get<double>();
      row.p25 = jr.at("p25").get<double>();
      row.p75 = jr.at("p75").get<double>();
      row.p90 = jr.at("p90").get<double>();
      s.summary.rows.push_back(row);
    }
    out.push_back(std::move(s));
  }
  return out;
}

void emit_output(const ExperimentResult& result, const std::string& path, OutputFormat format) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  if (format == OutputFormat::kCsv) {
    out << to_csv(result.series);
  } else {
    out << to_json(result).dump(2) << '\n';
  }
  out.flush();
  if (!out) throw IoError("failed writing '" + path + "'");
}

}  // namespace csgopt::bench
