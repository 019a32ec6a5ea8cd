#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "anytime/errors.hpp"
#include "anytime/harness.hpp"

namespace py = pybind11;
using namespace anytime;

namespace {

std::vector<std::pair<Round, double>> as_points(const py::object& data) {
  // Either RunResult rows or an iterable of (t, value) pairs.
  std::vector<std::pair<Round, double>> pts;
  for (const auto& item : data) {
    if (py::isinstance<TrajectoryRecord>(item)) {
      const auto& r = item.cast<const TrajectoryRecord&>();
      pts.emplace_back(r.t, r.primary_subopt());
    } else {
      pts.push_back(item.cast<std::pair<Round, double>>());
    }
  }
  return pts;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Online-to-batch conversions with last-iterate guarantees.";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<DataError>(m, "DataError", PyExc_RuntimeError);
  py::register_exception<AnalysisError>(m, "AnalysisError", PyExc_RuntimeError);

  py::class_<ProblemSpec>(m, "ProblemSpec")
      .def(py::init<>())
      .def_readwrite("kind", &ProblemSpec::kind)
      .def_readwrite("dim", &ProblemSpec::dim)
      .def_readwrite("spectrum_lo", &ProblemSpec::spectrum_lo)
      .def_readwrite("spectrum_hi", &ProblemSpec::spectrum_hi)
      .def_readwrite("xstar_norm", &ProblemSpec::xstar_norm)
      .def_readwrite("B", &ProblemSpec::B)
      .def_readwrite("noise", &ProblemSpec::noise)
      .def_readwrite("sigma", &ProblemSpec::sigma)
      .def_readwrite("problem_seed", &ProblemSpec::problem_seed)
      .def_readwrite("samples", &ProblemSpec::samples)
      .def_readwrite("ridge", &ProblemSpec::ridge);

  py::class_<ExperimentConfig>(m, "ExperimentConfig")
      .def(py::init<>())
      .def_property(
          "algo", [](const ExperimentConfig& c) { return algorithm_name(c.algo); },
          [](ExperimentConfig& c, const std::string& s) { c.algo = parse_algorithm(s); })
      .def_readwrite("learner", &ExperimentConfig::learner)
      .def_property(
          "schedule", [](const ExperimentConfig& c) { return c.schedule.name(); },
          [](ExperimentConfig& c, const std::string& s) { c.schedule = WeightSchedule::parse(s); })
      .def_readwrite("problem", &ExperimentConfig::problem)
      .def_readwrite("T", &ExperimentConfig::T)
      .def_readwrite("seeds", &ExperimentConfig::seeds)
      .def_readwrite("c", &ExperimentConfig::c)
      .def_readwrite("mu_surrogate", &ExperimentConfig::mu_surrogate)
      .def_readwrite("log_every", &ExperimentConfig::log_every)
      .def_readwrite("grid_density", &ExperimentConfig::grid_density)
      .def_readwrite("tail_frac", &ExperimentConfig::tail_frac)
      .def_readwrite("delta", &ExperimentConfig::delta)
      .def("validate", &ExperimentConfig::validate);

  py::class_<TrajectoryRecord>(m, "TrajectoryRecord")
      .def_readonly("t", &TrajectoryRecord::t)
      .def_readonly("alpha", &TrajectoryRecord::alpha)
      .def_readonly("alpha_cum", &TrajectoryRecord::alpha_cum)
      .def_readonly("subopt_x", &TrajectoryRecord::subopt_x)
      .def_readonly("subopt_y", &TrajectoryRecord::subopt_y)
      .def_readonly("grad_norm_true", &TrajectoryRecord::grad_norm_true)
      .def_readonly("measured_regret", &TrajectoryRecord::measured_regret)
      .def_readonly("bound", &TrajectoryRecord::bound)
      .def_property_readonly("primary_subopt", &TrajectoryRecord::primary_subopt);

  py::class_<AcceleratedConverter::StepSizeSums>(m, "StepSizeSums")
      .def_readonly("weighted_sq", &AcceleratedConverter::StepSizeSums::weighted_sq)
      .def_readonly("times_eta", &AcceleratedConverter::StepSizeSums::times_eta)
      .def_readonly("times_eta_sq", &AcceleratedConverter::StepSizeSums::times_eta_sq);

  py::class_<RunDiagnostics>(m, "RunDiagnostics")
      .def_readonly("max_identity_error", &RunDiagnostics::max_identity_error)
      .def_readonly("max_anytime_bound_violation", &RunDiagnostics::max_anytime_bound_violation)
      .def_readonly("final_measured_regret", &RunDiagnostics::final_measured_regret)
      .def_readonly("learner_regret_bound", &RunDiagnostics::learner_regret_bound)
      .def_readonly("alpha_cum", &RunDiagnostics::alpha_cum)
      .def_readonly("sum_sq_weights", &RunDiagnostics::sum_sq_weights)
      .def_readonly("max_oracle_grad_norm", &RunDiagnostics::max_oracle_grad_norm)
      .def_readonly("step_size_sums", &RunDiagnostics::step_size_sums)
      .def_readonly("rounds_completed", &RunDiagnostics::rounds_completed);

  py::class_<RunResult>(m, "RunResult")
      .def_readonly("seed", &RunResult::seed)
      .def_readonly("rows", &RunResult::rows)
      .def_readonly("diagnostics", &RunResult::diagnostics)
      .def_readonly("aborted", &RunResult::aborted)
      .def_readonly("abort_reason", &RunResult::abort_reason);

  py::class_<RateFit>(m, "RateFit")
      .def_readonly("slope", &RateFit::slope)
      .def_readonly("intercept", &RateFit::intercept)
      .def_readonly("r_squared", &RateFit::r_squared)
      .def_readonly("tail_fraction", &RateFit::tail_fraction)
      .def_readonly("n_points", &RateFit::n_points);

  py::class_<AggregateRow>(m, "AggregateRow")
      .def_readonly("t", &AggregateRow::t)
      .def_readonly("mean", &AggregateRow::mean)
      .def_readonly("median", &AggregateRow::median)
      .def_readonly("p95", &AggregateRow::p95)
      .def_readonly("n_seeds", &AggregateRow::n_seeds);

  py::class_<Problem>(m, "Problem")
      .def_property_readonly("name", [](const Problem& p) { return p.objective->name(); })
      .def_property_readonly("dim", [](const Problem& p) { return p.objective->dim(); })
      .def_property_readonly("x_star", [](const Problem& p) { return p.objective->x_star(); })
      .def_property_readonly("f_star", [](const Problem& p) { return p.objective->f_star(); })
      .def_property_readonly("smoothness",
                             [](const Problem& p) { return p.objective->smoothness(); })
      .def_property_readonly("strong_convexity",
                             [](const Problem& p) { return p.objective->strong_convexity(); })
      .def_property_readonly("diameter", [](const Problem& p) { return p.domain.diameter(); })
      .def("value", [](const Problem& p, const Vector& x) { return p.objective->value(x); })
      .def("gradient", [](const Problem& p, const Vector& x) { return p.objective->gradient(x); })
      .def("suboptimality",
           [](const Problem& p, const Vector& x) { return p.objective->suboptimality(x); })
      .def("project", [](const Problem& p, const Vector& x) { return p.domain.project(x); })
      .def("gradient_bound",
           [](const Problem& p) { return gradient_bound(*p.objective, p.domain, p.noise); },
           "Almost-sure bound on oracle gradient norms over the domain.");

  m.def("build_problem", &build_problem, py::arg("spec"));
  m.def(
      "run_single",
      [](const ExperimentConfig& cfg, std::uint64_t seed) {
        cfg.validate();
        const Problem p = build_problem(cfg.problem);
        py::gil_scoped_release release;
        return run_single(cfg, p, seed);
      },
      py::arg("config"), py::arg("seed") = 0);
  m.def("run_experiment", &run_experiment, py::arg("config"),
        py::call_guard<py::gil_scoped_release>());
  m.def(
      "fit_rate",
      [](const py::object& data, double tail) {
        const auto pts = as_points(data);
        return fit_rate(pts, tail);
      },
      py::arg("points"), py::arg("tail_fraction") = 0.5,
      "Tail slope of log value against log t. Accepts trajectory rows or (t, value) pairs.");
  m.def(
      "aggregate", [](const std::vector<RunResult>& runs) { return aggregate(runs); },
      py::arg("runs"));
  m.def("quantile", &quantile, py::arg("values"), py::arg("q"));
  m.def("logging_grid", &logging_grid, py::arg("T"), py::arg("log_every") = 0,
        py::arg("density") = 8);
  m.def("parse_seed_list", &parse_seed_list);

  m.def(
      "anytime_high_probability_bound",
      [](double R, double B, double G, const std::string& schedule, Round T, double delta) {
        return anytime_high_probability_bound(R, B, G, WeightSchedule::parse(schedule), T, delta);
      },
      py::arg("regret"), py::arg("B"), py::arg("G"), py::arg("schedule"), py::arg("T"),
      py::arg("delta"));
  m.def("strongly_convex_unit_weight_bound", &strongly_convex_unit_weight_bound, py::arg("mu"),
        py::arg("B"), py::arg("G"), py::arg("T"));
  m.def("strongly_convex_linear_weight_bound", &strongly_convex_linear_weight_bound,
        py::arg("mu"), py::arg("B"), py::arg("G"), py::arg("T"));
  m.def("optimistic_rate_bound", &optimistic_rate_bound, py::arg("L"), py::arg("B"),
        py::arg("sigma"), py::arg("T"));
  m.def("accelerated_rate_bound", &accelerated_rate_bound, py::arg("B"), py::arg("L"),
        py::arg("G"), py::arg("sigma"), py::arg("T"));
}
