#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "orkit/bench.hpp"
#include "orkit/decomposition.hpp"
#include "orkit/errors.hpp"
#include "orkit/format.hpp"
#include "orkit/instances.hpp"
#include "orkit/kernels.hpp"
#include "orkit/nlexpr.hpp"

namespace py = pybind11;
using namespace orkit;

namespace {

Model linear_instance(const std::string& family, std::int64_t size, std::int64_t facilities,
                      std::int64_t customers, std::int64_t time_steps, std::uint64_t seed) {
  if (family == "pmedian") return gen_pmedian({size, facilities, customers, seed});
  if (family == "cont5_2") return gen_cont5_2({size, time_steps > 0 ? time_steps : size});
  throw ConfigError("unknown linear family '" + family + "'");
}

NonlinearModel nonlinear_instance(const std::string& family, std::int64_t n) {
  if (family == "clnlbeam") return gen_clnlbeam({n});
  if (family == "cont5_1") return gen_cont5_1({n});
  throw ConfigError("unknown nonlinear family '" + family + "'");
}

InstanceDimensions dimensions(const std::string& family, std::int64_t size, std::int64_t facilities,
                              std::int64_t customers, std::int64_t time_steps) {
  if (family == "pmedian") return pmedian_dimensions({size, facilities, customers});
  if (family == "cont5_2") return cont5_2_dimensions({size, time_steps > 0 ? time_steps : size});
  if (family == "clnlbeam") return clnlbeam_dimensions({size});
  if (family == "cont5_1") return cont5_1_dimensions({size});
  throw ConfigError("unknown family '" + family + "'");
}

std::vector<VarState> states(const std::vector<bool>& basic) {
  std::vector<VarState> out;
  out.reserve(basic.size());
  for (bool b : basic) out.push_back(b ? VarState::kBasic : VarState::kLower);
  return out;
}

WorkerPoolConfig pool_config(int workers, const std::string& mode, double jitter, std::uint64_t seed) {
  WorkerPoolConfig cfg;
  cfg.workers = workers;
  if (mode == "threads") {
    cfg.mode = PoolMode::kThreads;
  } else if (mode != "simulated") {
    throw ConfigError("mode must be 'simulated' or 'threads'");
  }
  cfg.latency.jitter = jitter;
  cfg.latency.seed = seed;
  return cfg;
}

KernelOp kernel_op(const std::string& name) {
  for (KernelOp op : kAllKernelOps) {
    if (name == kernel_op_name(op)) return op;
  }
  throw ConfigError("unknown kernel operation '" + name + "'");
}

}  // namespace

PYBIND11_MODULE(_orkit, m) {
  m.attr("__version__") = "0.1.0";
  m.attr("DEFAULT_SEED") = kDefaultSeed;

  auto error = py::register_exception<Error>(m, "Error");
  py::register_exception<ConfigError>(m, "ConfigError", error);
  py::register_exception<DomainError>(m, "DomainError", error);
  py::register_exception<DimensionMismatch>(m, "DimensionMismatch", error);
  py::register_exception<ParseError>(m, "ParseError", error);
  py::register_exception<TraceVersionError>(m, "TraceVersionError", error);
  py::register_exception<OracleError>(m, "OracleError", error);

  py::class_<InstanceDimensions>(m, "Dimensions")
      .def_readonly("variables", &InstanceDimensions::variables)
      .def_readonly("constraints", &InstanceDimensions::constraints)
      .def_readonly("nonzeros", &InstanceDimensions::nonzeros);

  m.def("dimensions", &dimensions, py::arg("family"), py::arg("size"), py::arg("facilities") = 100,
        py::arg("customers") = 100, py::arg("time_steps") = 0,
        "Closed-form variable, constraint and nonzero counts of a generated instance.");

  py::class_<Model>(m, "Model")
      .def_property_readonly("num_variables", &Model::num_variables)
      .def_property_readonly("num_constraints", &Model::num_constraints)
      .def_property_readonly("nonzeros", [](const Model& mod) { return to_column_form(mod).a.nnz(); })
      .def("to_lp", [](const Model& mod, int digits) { return write_lp_string(mod, {digits}); },
           py::arg("digits") = 17)
      .def("to_mps", [](const Model& mod, int digits) { return write_mps_string(mod, {digits}); },
           py::arg("digits") = 17);

  m.def("generate", &linear_instance, py::arg("family"), py::arg("size"), py::arg("facilities") = 100,
        py::arg("customers") = 100, py::arg("time_steps") = 0, py::arg("seed") = kDefaultSeed,
        "Build a pmedian or cont5_2 linear model.");
  m.def("read_lp", [](const std::string& text) { return read_lp_string(text); }, py::arg("text"));

  py::class_<NonlinearModel>(m, "NonlinearModel")
      .def_property_readonly("num_variables", &NonlinearModel::num_variables)
      .def_property_readonly("num_constraints", &NonlinearModel::num_constraints)
      .def_property_readonly("lower_bounds", &NonlinearModel::lower_bounds)
      .def_property_readonly("upper_bounds", &NonlinearModel::upper_bounds)
      .def("constraint_values",
           [](const NonlinearModel& mod, const std::vector<double>& x) { return evaluate_constraints(mod, x); },
           py::arg("x"));

  m.def("generate_nonlinear", &nonlinear_instance, py::arg("family"), py::arg("n"),
        "Build a clnlbeam or cont5_1 nonlinear model.");

  py::class_<JacobianPlan>(m, "JacobianPlan")
      .def_property_readonly("nnz", &JacobianPlan::nnz)
      .def_property_readonly("num_rows", &JacobianPlan::num_rows)
      .def_property_readonly("num_cols", &JacobianPlan::num_cols)
      .def_property_readonly("row_ptr", &JacobianPlan::row_ptr)
      .def_property_readonly("columns", &JacobianPlan::columns)
      .def_property_readonly("num_classes", [](const JacobianPlan& p) { return p.classes().size(); })
      .def_property_readonly("differentiation_count", &JacobianPlan::differentiation_count)
      .def("evaluate", [](const JacobianPlan& p, const std::vector<double>& x) { return p.evaluate(x); },
           py::arg("x"));

  m.def("compile_jacobian", &compile_jacobian, py::arg("model"));

  py::class_<RatioTestResult>(m, "RatioTestResult")
      .def_readonly("result", &RatioTestResult::result)
      .def_readonly("theta_max", &RatioTestResult::theta_max)
      .def_readonly("candidates", &RatioTestResult::candidates);

  m.def(
      "ratio_test",
      [](const std::vector<double>& d, const std::vector<double>& alpha, const std::vector<bool>& basic,
         double eps_p, double eps_d) {
        const auto s = states(basic);
        return ratio_test(d, alpha, s, eps_p, eps_d);
      },
      py::arg("d"), py::arg("alpha"), py::arg("basic"), py::arg("eps_p") = 1e-9, py::arg("eps_d") = 1e-9,
      "Two-pass dual ratio test; indices are 0-based.");

  m.def(
      "axpy_checked",
      [](double a, const std::vector<double>& x, std::vector<double> y, double eps) {
        auto below = axpy_checked(a, x, y, eps);
        return py::make_tuple(y, below);
      },
      py::arg("a"), py::arg("x"), py::arg("y"), py::arg("eps") = 1e-9,
      "Returns (a*x + y, indices that end below -eps).");

  py::class_<SolveResult>(m, "SolveResult")
      .def_readonly("x", &SolveResult::x)
      .def_readonly("value", &SolveResult::value)
      .def_readonly("lower_bound", &SolveResult::lower_bound)
      .def_readonly("converged", &SolveResult::converged)
      .def_readonly("iterations", &SolveResult::iterations)
      .def_readonly("subproblems", &SolveResult::subproblems)
      .def_readonly("lower_bounds", &SolveResult::lower_bounds)
      .def_property_readonly("iterates", [](const SolveResult& r) {
        std::vector<std::vector<double>> out;
        for (const auto& it : r.iterates) out.push_back(it.x);
        return out;
      });

  py::class_<DecompositionProblem>(m, "DecompositionProblem")
      .def_readonly("name", &DecompositionProblem::name)
      .def_readonly("components", &DecompositionProblem::components);

  m.def("abs_sum_problem", &abs_sum_problem, py::arg("centers"), py::arg("lower"), py::arg("upper"));
  m.def("two_stage_toy_problem", [] { return two_stage_decomposition(two_stage_toy()); });
  m.def("two_stage_toy_extensive_value", [] {
    const LpSolution s = solve_dense_lp(two_stage_extensive_form(two_stage_toy()));
    if (s.status != LpStatus::kOptimal) throw ConfigError("extensive form is not optimal");
    return s.objective;
  });

  m.def(
      "solve",
      [](const DecompositionProblem& p, double alpha, int workers, bool force_async, double tol,
         const std::string& mode, double jitter, std::uint64_t seed, std::int64_t max_iterations) {
        MasterConfig cfg;
        cfg.alpha = alpha;
        cfg.tol = tol;
        cfg.max_iterations = max_iterations;
        const WorkerPoolConfig pool = pool_config(workers, mode, jitter, seed);
        py::gil_scoped_release release;
        return alpha == 1.0 && !force_async ? sync_solve(p, cfg, pool) : async_solve(p, cfg, pool);
      },
      py::arg("problem"), py::arg("alpha") = 1.0, py::arg("workers") = 1, py::arg("force_async") = false,
      py::arg("tol") = 1e-6, py::arg("mode") = "simulated", py::arg("jitter") = 0.0,
      py::arg("seed") = kDefaultSeed, py::arg("max_iterations") = 1000,
      "Cutting-plane solve; synchronous when alpha is 1 unless force_async is set.");

  m.def("parallel_efficiency", &parallel_efficiency, py::arg("speed"), py::arg("workers"),
        py::arg("baseline_speed"), py::arg("baseline_workers"));

  py::class_<KernelTrace>(m, "KernelTrace")
      .def_readonly("name", &KernelTrace::name)
      .def_property_readonly("num_records", [](const KernelTrace& t) { return t.records.size(); })
      .def("to_json",
           [](const KernelTrace& t) {
             std::ostringstream out;
             write_trace(t, out);
             return out.str();
           })
      .def("digest", [](const KernelTrace& t, const std::string& op) { return replay_digest(t, kernel_op(op)); },
           py::arg("operation"))
      .def("time", [](const KernelTrace& t, const std::string& op, int reps) {
             return time_kernel(t, kernel_op(op), reps);
           },
           py::arg("operation"), py::arg("reps") = 3);

  m.def(
      "synthetic_trace",
      [](std::int64_t rows, std::int64_t cols, double density, double vector_density, std::int64_t iterations,
         std::uint64_t seed) {
        SyntheticSpec spec;
        spec.rows = rows;
        spec.cols = cols;
        spec.column_density = density;
        spec.vector_density = vector_density;
        spec.iterations = iterations;
        spec.seed = seed;
        return synthetic_trace(spec);
      },
      py::arg("rows") = 1000, py::arg("cols") = 2000, py::arg("density") = 0.01,
      py::arg("vector_density") = 0.05, py::arg("iterations") = 200, py::arg("seed") = kDefaultSeed);
  m.def(
      "read_trace",
      [](const std::string& text) {
        std::istringstream in(text);
        return read_trace(in);
      },
      py::arg("text"));
  m.def("kernel_operations", [] {
    std::vector<std::string> names;
    for (KernelOp op : kAllKernelOps) names.emplace_back(kernel_op_name(op));
    return names;
  });
}
