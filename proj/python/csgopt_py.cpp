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

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "csgopt/bench/experiment.hpp"
#include "csgopt/error.hpp"
#include "csgopt/history.hpp"
#include "csgopt/line_search.hpp"
#include "csgopt/optimizers.hpp"
#include "csgopt/testbed.hpp"

namespace py = pybind11;
using namespace csgopt;

namespace {

SampleHistory history_from_arrays(const Eigen::MatrixXd& us, const Eigen::MatrixXd& xs,
                                  const Eigen::VectorXd& js, const Eigen::MatrixXd& gs) {
  if (us.rows() != xs.rows() || us.rows() != js.size() || us.rows() != gs.rows() ||
      us.cols() != gs.cols()) {
    throw InvalidInput("history arrays must have matching row counts");
  }
  SampleHistory history(static_cast<int>(us.cols()), static_cast<int>(xs.cols()));
  for (Eigen::Index k = 0; k < us.rows(); ++k) {
    history.append(us.row(k).transpose(), xs.row(k).transpose(), js[k], gs.row(k).transpose());
  }
  return history;
}

}  // namespace

PYBIND11_MODULE(_csgopt, m) {
  m.doc() = "Continuous stochastic gradient optimizers";
  m.attr("__version__") = bench::kLibraryVersion;

  py::register_exception<InvalidInput>(m, "InvalidInput", PyExc_ValueError);
  py::register_exception<EvaluationError>(m, "EvaluationError", PyExc_RuntimeError);
  py::register_exception<IoError>(m, "IoError", PyExc_OSError);

  py::class_<FeasibleSet>(m, "FeasibleSet")
      .def_static("box", &FeasibleSet::box, py::arg("lower"), py::arg("upper"))
      .def_static("cube", &FeasibleSet::cube, py::arg("dim"), py::arg("lower"), py::arg("upper"))
      .def_static("ball", &FeasibleSet::ball, py::arg("center"), py::arg("radius"))
      .def_property_readonly("dim", &FeasibleSet::dim)
      .def("project", &FeasibleSet::project, py::arg("v"))
      .def("contains", &FeasibleSet::contains, py::arg("v"), py::arg("slack") = 1e-12);

  m.def("stationarity_residual",
        py::overload_cast<const FeasibleSet&, const Eigen::Ref<const Vector>&,
                          const Eigen::Ref<const Vector>&, double>(&stationarity_residual),
        py::arg("set"), py::arg("u"), py::arg("g"), py::arg("t"));

  py::class_<StochasticProblem>(m, "StochasticProblem")
      .def_property_readonly("name", &StochasticProblem::name)
      .def_property_readonly("dim_design", &StochasticProblem::dim_design)
      .def_property_readonly("dim_param", &StochasticProblem::dim_param)
      .def("eval_integrand", &StochasticProblem::eval_integrand, py::arg("u"), py::arg("x"))
      .def("eval_integrand_grad", &StochasticProblem::eval_integrand_grad, py::arg("u"),
           py::arg("x"))
      .def("feasible_set", &StochasticProblem::feasible_set, py::return_value_policy::reference_internal)
      .def("true_objective", &StochasticProblem::true_objective, py::arg("u"))
      .def("true_gradient", &StochasticProblem::true_gradient, py::arg("u"))
      .def("known_minimizer", &StochasticProblem::known_minimizer);
  py::class_<QuadraticProblem1D, StochasticProblem>(m, "QuadraticProblem1D").def(py::init<>());
  py::class_<BumpProblem5D, StochasticProblem>(m, "BumpProblem5D").def(py::init<>());
  py::class_<NoisyRosenbrock, StochasticProblem>(m, "NoisyRosenbrock").def(py::init<>());
  m.def("make_problem", &make_problem, py::arg("name"));

  m.def(
      "quadrature_oracle",
      [](const StochasticProblem& p, const Vector& u, int nodes) {
        const QuadratureResult r = quadrature_oracle(p, u, nodes);
        return py::make_tuple(r.value, r.gradient);
      },
      py::arg("problem"), py::arg("u"), py::arg("nodes_per_dim"));
  m.def("finite_difference_check", &finite_difference_check, py::arg("problem"), py::arg("u"),
        py::arg("x"), py::arg("h"));

  m.def(
      "empirical_weights",
      [](const Eigen::MatrixXd& us, const Eigen::MatrixXd& xs, const Vector& u) {
        const SampleHistory history = history_from_arrays(
            us, xs, Eigen::VectorXd::Zero(us.rows()), Eigen::MatrixXd::Zero(us.rows(), us.cols()));
        return empirical_weights(history, u).alphas;
      },
      py::arg("us"), py::arg("xs"), py::arg("u"),
      "Empirical weights of records (us[k], xs[k]) at design point u.");
  m.def(
      "estimate_at",
      [](const Eigen::MatrixXd& us, const Eigen::MatrixXd& xs, const Eigen::VectorXd& js,
         const Eigen::MatrixXd& gs, const Vector& u) {
        const SampleHistory history = history_from_arrays(us, xs, js, gs);
        const AggregateEstimate est = estimate_at(history, u);
        return py::make_tuple(est.j_hat, est.g_hat);
      },
      py::arg("us"), py::arg("xs"), py::arg("js"), py::arg("gs"), py::arg("u"));

  py::class_<LineSearchConfig>(m, "LineSearchConfig")
      .def(py::init([](int T, double c1, double c2, int K) {
             LineSearchConfig cfg{T, c1, c2, K};
             cfg.validate();
             return cfg;
           }),
           py::arg("T") = 30, py::arg("c1") = 1e-4, py::arg("c2") = 0.9, py::arg("K") = 1)
      .def_readwrite("T", &LineSearchConfig::max_trials)
      .def_readwrite("c1", &LineSearchConfig::c1)
      .def_readwrite("c2", &LineSearchConfig::c2)
      .def_readwrite("K", &LineSearchConfig::memory);

  m.def(
      "check_sw1_star",
      [](double j_trial, const std::vector<double>& memory, const Vector& g_hat, const Vector& u,
         const Vector& s, double c1) { return check_sw1_star(j_trial, memory, g_hat, u, s, c1); },
      py::arg("j_trial"), py::arg("memory"), py::arg("g_hat"), py::arg("u"), py::arg("s"),
      py::arg("c1"));
  m.def("check_sw2", &check_sw2, py::arg("g_trial"), py::arg("g_hat"), py::arg("u"),
        py::arg("s"), py::arg("c2"));

  py::class_<ConstantStep>(m, "ConstantStep")
      .def(py::init<double>(), py::arg("tau"))
      .def_readwrite("tau", &ConstantStep::tau);
  py::class_<PowerDecayStep>(m, "PowerDecayStep")
      .def(py::init<double, double>(), py::arg("tau0"), py::arg("d"))
      .def_readwrite("tau0", &PowerDecayStep::tau0)
      .def_readwrite("d", &PowerDecayStep::d);
  m.def("schedule_value", &schedule_value, py::arg("schedule"), py::arg("n"));

  py::class_<RunConfig>(m, "RunConfig")
      .def(py::init([](std::size_t max_iters, std::uint64_t seed,
                       std::optional<double> stop_residual, std::size_t trace_every) {
             RunConfig cfg;
             cfg.max_iters = max_iters;
             cfg.seed = seed;
             cfg.stop_residual = stop_residual;
             cfg.trace_every = trace_every;
             return cfg;
           }),
           py::arg("max_iters") = 500, py::arg("seed") = 0, py::arg("stop_residual") = py::none(),
           py::arg("trace_every") = 1)
      .def_readwrite("max_iters", &RunConfig::max_iters)
      .def_readwrite("seed", &RunConfig::seed)
      .def_readwrite("stop_residual", &RunConfig::stop_residual)
      .def_readwrite("trace_every", &RunConfig::trace_every);

  py::class_<TraceRow>(m, "TraceRow")
      .def_readonly("n", &TraceRow::n)
      .def_readonly("u", &TraceRow::u)
      .def_readonly("eta0", &TraceRow::eta0)
      .def_readonly("tau", &TraceRow::tau)
      .def_readonly("j_hat", &TraceRow::j_hat)
      .def_readonly("g_hat", &TraceRow::g_hat)
      .def_readonly("residual", &TraceRow::residual)
      .def_readonly("refinements", &TraceRow::refinements)
      .def_readonly("lipschitz", &TraceRow::lipschitz)
      .def_readonly("error", &TraceRow::error)
      .def_readonly("j_error", &TraceRow::j_error)
      .def_readonly("g_error", &TraceRow::g_error);

  py::class_<IterateTrace>(m, "IterateTrace")
      .def_readonly("optimizer", &IterateTrace::optimizer)
      .def_readonly("rows", &IterateTrace::rows)
      .def_readonly("initial_u", &IterateTrace::initial_u)
      .def_readonly("final_u", &IterateTrace::final_u)
      .def_readonly("final_error", &IterateTrace::final_error)
      .def_readonly("iterations", &IterateTrace::iterations)
      .def_readonly("total_refinements", &IterateTrace::total_refinements)
      .def_readonly("warnings", &IterateTrace::warnings);

  m.def("run_csg_constant", &run_csg_constant, py::arg("problem"), py::arg("tau"),
        py::arg("cfg"), py::arg("u0"), py::call_guard<py::gil_scoped_release>());
  m.def("run_bcsg", &run_bcsg, py::arg("problem"), py::arg("schedule"), py::arg("line_cfg"),
        py::arg("cfg"), py::arg("u0"), py::call_guard<py::gil_scoped_release>());
  m.def("run_scibl", &run_scibl, py::arg("problem"), py::arg("c_min"), py::arg("c_max"),
        py::arg("line_cfg"), py::arg("cfg"), py::arg("u0"),
        py::call_guard<py::gil_scoped_release>());
  m.def("run_sg", &run_sg, py::arg("problem"), py::arg("schedule"), py::arg("cfg"),
        py::arg("u0"), py::call_guard<py::gil_scoped_release>());
  m.def("run_adagrad", &run_adagrad, py::arg("problem"), py::arg("schedule"), py::arg("eps"),
        py::arg("cfg"), py::arg("u0"), py::call_guard<py::gil_scoped_release>());

  m.def(
      "quantile_aggregate",
      [](const std::vector<std::vector<double>>& metric) {
        py::list rows;
        for (const auto& r : bench::quantile_aggregate(metric).rows) {
          py::dict d;
          d["iter"] = r.iter;
          d["median"] = r.median;
          d["p10"] = r.p10;
          d["p25"] = r.p25;
          d["p75"] = r.p75;
          d["p90"] = r.p90;
          rows.append(d);
        }
        return rows;
      },
      py::arg("metric"), "Per-column quantiles of a replicates x iterations matrix.");

  m.def(
      "run_experiment",
      [](const std::string& config_json) {
        const auto config = nlohmann::json::parse(config_json);
        bench::ExperimentSpec spec;
        bench::merge_json(spec, config);
        if (config.contains("threads")) spec.threads = config.at("threads").get<std::size_t>();
        bench::ExperimentResult result;
        {
          py::gil_scoped_release release;
          result = bench::run_experiment(spec);
        }
        return bench::to_json(result).dump();
      },
      py::arg("config_json"),
      "Runs an experiment described by a JSON spec and returns the JSON result.");
}
