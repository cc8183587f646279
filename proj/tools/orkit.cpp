// orkit command-line tool: instance generation, benchmarks, decomposition
// runs and trace replay. Exit codes: 0 success, 2 usage error, 1 failure.
#include <algorithm>
#include <chrono>
#include <cinttypes>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "orkit/bench.hpp"
#include "orkit/decomposition.hpp"
#include "orkit/errors.hpp"
#include "orkit/format.hpp"
#include "orkit/instances.hpp"
#include "orkit/nlexpr.hpp"

namespace {

using namespace orkit;
using Clock = std::chrono::steady_clock;
using json = nlohmann::json;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::uint64_t default_seed() {
  const char* env = std::getenv("ORKIT_SEED");
  if (env == nullptr || *env == '\0') return kDefaultSeed;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(env, &end, 10);
  if (*end != '\0') throw UsageError("ORKIT_SEED must be a non-negative integer");
  return v;
}

const std::vector<std::string> kLinearFamilies = {"pmedian", "cont5_2"};
const std::vector<std::string> kNonlinearFamilies = {"clnlbeam", "cont5_1"};

bool is_linear(const std::string& family) {
  return std::find(kLinearFamilies.begin(), kLinearFamilies.end(), family) != kLinearFamilies.end();
}

struct InstanceOptions {
  std::string family;
  std::vector<std::int64_t> sizes;
  std::int64_t facilities = 100;
  std::int64_t customers = 100;
  std::int64_t time_steps = 0;  // cont5_2: defaults to the space steps
  std::uint64_t seed = 0;
};

void add_instance_options(CLI::App* cmd, InstanceOptions& o, const std::vector<std::string>& families) {
  cmd->add_option("--family", o.family, "Instance family")->required()->check(CLI::IsMember(families));
  cmd->add_option("--size", o.sizes,
                  "Primary size: locations (pmedian), space steps (cont5_2) or n; comma separated")
      ->required()
      ->delimiter(',');
  cmd->add_option("--facilities", o.facilities, "pmedian: facilities to open");
  cmd->add_option("--customers", o.customers, "pmedian: number of customers");
  cmd->add_option("--time-steps", o.time_steps, "cont5_2: time steps (default: same as --size)");
  cmd->add_option("--seed", o.seed, "Random seed (default: ORKIT_SEED or 20130521)");
}

Model build_linear(const InstanceOptions& o, std::int64_t size) {
  if (o.family == "pmedian") return gen_pmedian({size, o.facilities, o.customers, o.seed});
  return gen_cont5_2({size, o.time_steps > 0 ? o.time_steps : size});
}

NonlinearModel build_nonlinear(const std::string& family, std::int64_t n) {
  return family == "clnlbeam" ? gen_clnlbeam({n}) : gen_cont5_1({n});
}

std::int64_t write_model(const Model& m, const std::string& format, std::ostream& out) {
  return format == "mps" ? write_mps(m, out) : write_lp(m, out);
}

// generate

struct GenerateOptions {
  InstanceOptions inst;
  std::string format = "lp";
  std::string out;
};

int run_generate(const GenerateOptions& o) {
  if (o.inst.sizes.size() != 1) throw UsageError("generate takes a single --size");
  const std::int64_t size = o.inst.sizes.front();
  if (!is_linear(o.inst.family)) {
    if (!o.out.empty()) throw UsageError(o.inst.family + " is nonlinear and cannot be written as LP/MPS");
    const NonlinearModel m = build_nonlinear(o.inst.family, size);
    const JacobianPlan plan = compile_jacobian(m);
    std::printf("vars=%" PRId64 " rows=%" PRId64 " jac_nz=%" PRId64 "\n", m.num_variables(),
                m.num_constraints(), plan.nnz());
    return 0;
  }
  const Model m = build_linear(o.inst, size);
  if (!o.out.empty()) {
    std::ofstream out(o.out, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + o.out + " for writing");
    write_model(m, o.format, out);
    if (!out.flush()) throw std::runtime_error("write to " + o.out + " failed");
  }
  std::printf("vars=%" PRId64 " rows=%" PRId64 " nz=%" PRId64 "\n", m.num_variables(), m.num_constraints(),
              to_column_form(m).a.nnz());
  return 0;
}

// bench-build

struct BenchBuildOptions {
  InstanceOptions inst;
  std::string format = "lp";
  int reps = 3;
  std::string out;
};

int run_bench_build(const BenchBuildOptions& o) {
  if (!is_linear(o.inst.family)) throw UsageError("bench-build supports pmedian and cont5_2");
  const std::filesystem::path dir = o.out.empty() ? std::filesystem::temp_directory_path() : std::filesystem::path(o.out);
  std::filesystem::create_directories(dir);
  std::printf("# reps=%d statistic=min unit=seconds\n", o.reps);
  std::printf("family\tsize\tformat\tvars\trows\tbytes\tseconds\n");
  for (std::int64_t size : o.inst.sizes) {
    const auto path = dir / (o.inst.family + "-" + std::to_string(size) + "." + o.format);
    double best = 1e300;
    std::int64_t bytes = 0, vars = 0, rows = 0;
    for (int r = 0; r < o.reps; ++r) {
      const auto t0 = Clock::now();
      const Model m = build_linear(o.inst, size);
      std::ofstream out(path, std::ios::binary);
      if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
      bytes = write_model(m, o.format, out);
      out.close();
      if (!out) throw std::runtime_error("write to " + path.string() + " failed");
      best = std::min(best, seconds_since(t0));
      vars = m.num_variables();
      rows = m.num_constraints();
    }
    if (o.out.empty()) std::filesystem::remove(path);
    std::printf("%s\t%" PRId64 "\t%s\t%" PRId64 "\t%" PRId64 "\t%" PRId64 "\t%.3f\n", o.inst.family.c_str(),
                size, o.format.c_str(), vars, rows, bytes, best);
  }
  return 0;
}

// bench-kernels

struct BenchKernelsOptions {
  std::vector<std::string> traces;
  std::string family;
  std::vector<std::int64_t> sizes;
  SyntheticSpec synthetic;
  int instances = 1;
  int reps = 3;
  std::string out;
};

KernelTrace load_trace(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  return read_trace(in);
}

int run_bench_kernels(const BenchKernelsOptions& o) {
  std::vector<KernelTrace> traces;
  for (const auto& path : o.traces) traces.push_back(load_trace(path));
  if (!o.family.empty()) {
    InstanceOptions inst;
    inst.family = o.family;
    inst.seed = o.synthetic.seed;
    for (std::int64_t size : o.sizes) {
      const CscMatrix a = to_column_form(build_linear(inst, size)).a;
      traces.push_back(synthetic_trace(a, o.synthetic, o.family + "-" + std::to_string(size)));
    }
  }
  if (traces.empty()) {
    for (int k = 0; k < o.instances; ++k) {
      SyntheticSpec spec = o.synthetic;
      spec.seed += static_cast<std::uint64_t>(k);
      KernelTrace t = synthetic_trace(spec);
      if (o.instances > 1) t.name += "-" + std::to_string(k + 1);
      traces.push_back(std::move(t));
    }
  }
  if (!o.out.empty()) {
    if (traces.size() != 1) throw UsageError("--out saves a trace and needs exactly one instance");
    std::ofstream out(o.out, std::ios::binary);
    write_trace(traces.front(), out);
    if (!out.flush()) throw std::runtime_error("write to " + o.out + " failed");
  }

  std::printf("# reps=%d statistic=min_over_reps_of_mean_per_record unit=seconds\n", o.reps);
  std::printf("operation");
  for (const auto& t : traces) std::printf("\t%s", t.name.c_str());
  std::printf("\tgeomean\n");
  for (KernelOp op : kAllKernelOps) {
    std::vector<double> times;
    for (const auto& t : traces) times.push_back(time_kernel(t, op, o.reps));
    std::printf("%s", kernel_op_name(op));
    for (double s : times) std::printf("\t%.6e", s);
    std::printf("\t%.6e\n", geometric_mean(times));
  }
  return 0;
}

// jacobian

struct JacobianOptions {
  std::string family;
  std::vector<std::int64_t> sizes;
  int reps = 3;
  std::uint64_t seed = 0;
};

int run_jacobian(const JacobianOptions& o) {
  std::printf("# reps=%d statistic=min\n", o.reps);
  std::printf("family\tn\tvars\trows\tjac_nz\tclasses\tbuild_s\teval_ms\n");
  for (std::int64_t n : o.sizes) {
    double build = 1e300;
    std::optional<NonlinearModel> model;
    std::optional<JacobianPlan> plan;
    for (int r = 0; r < o.reps; ++r) {
      const auto t0 = Clock::now();
      NonlinearModel m = build_nonlinear(o.family, n);
      JacobianPlan p = compile_jacobian(m);
      build = std::min(build, seconds_since(t0));
      model = std::move(m);
      plan = std::move(p);
    }
    SplitMix64 rng(o.seed);
    std::vector<double> x(model->num_variables());
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double lo = std::max(model->lower_bounds()[i], -1.0);
      const double hi = std::min(model->upper_bounds()[i], 1.0);
      x[i] = rng.uniform(lo, hi);
    }
    std::vector<double> values(plan->nnz()), first;
    double eval = 1e300;
    for (int r = 0; r < o.reps; ++r) {
      const auto t0 = Clock::now();
      plan->evaluate(x, values);
      eval = std::min(eval, seconds_since(t0));
      if (r == 0) {
        first = values;
      } else if (values != first) {
        throw std::runtime_error("Jacobian evaluation is not repeatable");
      }
    }
    std::printf("%s\t%" PRId64 "\t%" PRId64 "\t%" PRId64 "\t%" PRId64 "\t%zu\t%.3f\t%.3f\n", o.family.c_str(), n,
                model->num_variables(), model->num_constraints(), plan->nnz(), plan->classes().size(), build,
                eval * 1e3);
  }
  return 0;
}

// decompose

struct DecomposeOptions {
  std::string problem;
  int workers = 1;
  std::string mode = "simulated";
  double alpha = 1.0;
  double tol = 1e-6;
  bool force_async = false;
  std::int64_t max_iterations = 1000;
  std::optional<double> trust_radius;
  double latency = 1.0;
  double jitter = 0.0;
  std::uint64_t seed = 0;
  std::string trace_out;
};

std::vector<double> doubles(const json& j, const char* key) {
  if (!j.contains(key)) throw UsageError(std::string("problem spec is missing '") + key + "'");
  return j.at(key).get<std::vector<double>>();
}

DecompositionProblem load_problem(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  json spec;
  try {
    spec = json::parse(in);
  } catch (const json::exception& e) {
    throw UsageError(path + ": " + e.what());
  }
  try {
    const std::string type = spec.value("type", "");
    if (type == "abs_sum") {
      return abs_sum_problem(spec.at("centers").get<std::vector<std::vector<double>>>(),
                             doubles(spec, "lower"), doubles(spec, "upper"));
    }
    if (type == "two_stage") {
      if (!spec.contains("c")) return two_stage_decomposition(two_stage_toy());
      TwoStageProblem p;
      p.c = doubles(spec, "c");
      p.q = doubles(spec, "q");
      p.w = spec.at("w").get<std::vector<std::vector<double>>>();
      p.t = spec.at("t").get<std::vector<std::vector<double>>>();
      for (const auto& s : spec.at("scenarios")) {
        p.scenarios.push_back({s.at("probability").get<double>(), s.at("h").get<std::vector<double>>()});
      }
      p.lower = doubles(spec, "lower");
      p.upper = doubles(spec, "upper");
      return two_stage_decomposition(std::move(p));
    }
    throw UsageError("problem type must be 'abs_sum' or 'two_stage'");
  } catch (const json::exception& e) {
    throw UsageError(path + ": " + e.what());
  }
}

int run_decompose(const DecomposeOptions& o) {
  if (!(o.alpha > 0.0 && o.alpha <= 1.0)) throw UsageError("--alpha must lie in (0, 1]");
  if (o.workers < 1) throw UsageError("--workers must be at least 1");
  const DecompositionProblem problem = load_problem(o.problem);

  MasterConfig cfg;
  cfg.tol = o.tol;
  cfg.alpha = o.alpha;
  cfg.max_iterations = o.max_iterations;
  cfg.trust_radius = o.trust_radius;
  WorkerPoolConfig pool;
  pool.workers = o.workers;
  pool.mode = o.mode == "threads" ? PoolMode::kThreads : PoolMode::kSimulated;
  pool.latency.base = o.latency;
  pool.latency.jitter = o.jitter;
  pool.latency.seed = o.seed;

  const bool sync = o.alpha == 1.0 && !o.force_async;
  auto solve = [&](const WorkerPoolConfig& p) {
    return sync ? sync_solve(problem, cfg, p) : async_solve(problem, cfg, p);
  };
  const SolveResult r = solve(pool);
  WorkerPoolConfig single = pool;
  single.workers = 1;
  const SolveResult base = o.workers == 1 ? r : solve(single);
  const PoolMetrics metrics = compute_metrics(r.trace, base.trace);

  if (!o.trace_out.empty()) {
    std::ofstream out(o.trace_out);
    write_pool_trace(r.trace, out);
    if (!out.flush()) throw std::runtime_error("write to " + o.trace_out + " failed");
  }
  std::printf("problem\tmethod\tmode\tworkers\talpha\tconverged\tvalue\tlower_bound\titerations\t"
              "subproblems\tspeed\tefficiency\n");
  std::printf("%s\t%s\t%s\t%d\t%g\t%d\t%.6f\t%.6f\t%" PRId64 "\t%" PRId64 "\t%.3f\t%.1f\n",
              problem.name.c_str(), sync ? "sync" : "async", o.mode.c_str(), o.workers, o.alpha,
              r.converged ? 1 : 0, r.value, r.lower_bound, r.iterations, r.subproblems, metrics.speed,
              metrics.efficiency);
  return 0;
}

// replay

struct ReplayOptions {
  std::string trace;
  std::string op = "all";
};

int run_replay(const ReplayOptions& o) {
  const KernelTrace t = load_trace(o.trace);
  std::printf("operation\trecords\tdigest\n");
  for (KernelOp op : kAllKernelOps) {
    if (o.op != "all" && o.op != kernel_op_name(op)) continue;
    std::printf("%s\t%zu\t%016" PRIx64 "\n", kernel_op_name(op), t.records.size(), replay_digest(t, op));
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"orkit: optimization model building, kernel and decomposition benchmarks"};
  app.require_subcommand(1);

  std::uint64_t seed = 0;
  try {
    seed = default_seed();
  } catch (const UsageError& e) {
    std::cerr << "orkit: " << e.what() << "\n";
    return 2;
  }

  std::vector<std::string> all_families = kLinearFamilies;
  all_families.insert(all_families.end(), kNonlinearFamilies.begin(), kNonlinearFamilies.end());
  const std::vector<std::string> formats = {"lp", "mps"};

  GenerateOptions gen;
  gen.inst.seed = seed;
  auto* generate = app.add_subcommand("generate", "Generate an instance and optionally write it");
  add_instance_options(generate, gen.inst, all_families);
  generate->add_option("--format", gen.format, "Output format")->check(CLI::IsMember(formats));
  generate->add_option("--out", gen.out, "Output file (linear families only)");

  BenchBuildOptions bb;
  bb.inst.seed = seed;
  auto* bench_build = app.add_subcommand("bench-build", "Time instance generation plus file output");
  add_instance_options(bench_build, bb.inst, kLinearFamilies);
  bench_build->add_option("--format", bb.format, "Output format")->check(CLI::IsMember(formats));
  bench_build->add_option("--reps", bb.reps, "Repetitions; the minimum is reported")
      ->check(CLI::PositiveNumber);
  bench_build->add_option("--out", bb.out, "Directory to keep the written files in");

  BenchKernelsOptions bk;
  bk.synthetic.seed = seed;
  auto* bench_kernels = app.add_subcommand("bench-kernels", "Time the six simplex kernels on traces");
  bench_kernels->add_option("--trace", bk.traces, "Saved trace file (repeatable)");
  bench_kernels->add_option("--family", bk.family, "Take the matrix from a generated instance")
      ->check(CLI::IsMember(kLinearFamilies));
  bench_kernels->add_option("--size", bk.sizes, "Sizes for --family")->delimiter(',');
  bench_kernels->add_option("--rows", bk.synthetic.rows, "Synthetic matrix rows");
  bench_kernels->add_option("--cols", bk.synthetic.cols, "Synthetic matrix columns");
  bench_kernels->add_option("--density", bk.synthetic.column_density, "Synthetic matrix density");
  bench_kernels->add_option("--vector-density", bk.synthetic.vector_density, "Density of sampled rho vectors");
  bench_kernels->add_option("--iterations", bk.synthetic.iterations, "Records per trace");
  bench_kernels->add_option("--instances", bk.instances, "Synthetic instances, seeds seed..seed+k-1")
      ->check(CLI::PositiveNumber);
  bench_kernels->add_option("--seed", bk.synthetic.seed, "Random seed (default: ORKIT_SEED or 20130521)");
  bench_kernels->add_option("--reps", bk.reps, "Repetitions; the minimum is reported")
      ->check(CLI::PositiveNumber);
  bench_kernels->add_option("--out", bk.out, "Save the generated trace to this file");

  JacobianOptions jo;
  jo.seed = seed;
  auto* jacobian = app.add_subcommand("jacobian", "Time Jacobian plan compilation and evaluation");
  jacobian->add_option("--family", jo.family, "Nonlinear family")
      ->required()
      ->check(CLI::IsMember(kNonlinearFamilies));
  jacobian->add_option("--size", jo.sizes, "Values of n, comma separated")->required()->delimiter(',');
  jacobian->add_option("--reps", jo.reps, "Repetitions; the minimum is reported")->check(CLI::PositiveNumber);
  jacobian->add_option("--seed", jo.seed, "Seed for the evaluation point");

  DecomposeOptions dec;
  dec.seed = seed;
  auto* decompose = app.add_subcommand("decompose", "Run the cutting-plane method on a problem spec");
  decompose->add_option("--problem", dec.problem, "JSON problem spec")->required();
  decompose->add_option("--workers", dec.workers, "Worker count");
  decompose->add_option("--mode", dec.mode, "simulated or threads")
      ->check(CLI::IsMember({"simulated", "threads"}));
  decompose->add_option("--alpha", dec.alpha, "Proportion of results that triggers a new iterate");
  decompose->add_option("--tol", dec.tol, "Relative gap tolerance");
  decompose->add_flag("--async", dec.force_async, "Use the asynchronous driver even with alpha = 1");
  decompose->add_option("--max-iter", dec.max_iterations, "Iteration limit");
  decompose->add_option("--trust-radius", dec.trust_radius, "Half-width of a box around the incumbent");
  decompose->add_option("--latency", dec.latency, "Simulated task duration");
  decompose->add_option("--jitter", dec.jitter, "Random extra simulated duration in [0, jitter)");
  decompose->add_option("--seed", dec.seed, "Seed for simulated latencies");
  decompose->add_option("--trace-out", dec.trace_out, "Write the pool event trace here");

  ReplayOptions rep;
  auto* replay = app.add_subcommand("replay", "Replay a saved kernel trace and print output digests");
  replay->add_option("--trace", rep.trace, "Trace file")->required();
  std::vector<std::string> ops = {"all"};
  for (KernelOp op : kAllKernelOps) ops.push_back(kernel_op_name(op));
  replay->add_option("--op", rep.op, "Kernel to replay")->check(CLI::IsMember(ops));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    std::cerr << app.help();
    return 2;
  }

  CLI::App* active = app.get_subcommands().front();
  try {
    if (active == generate) return run_generate(gen);
    if (active == bench_build) return run_bench_build(bb);
    if (active == bench_kernels) return run_bench_kernels(bk);
    if (active == jacobian) return run_jacobian(jo);
    if (active == decompose) return run_decompose(dec);
    return run_replay(rep);
  } catch (const UsageError& e) {
    std::cerr << "orkit: " << e.what() << "\n" << active->help();
    return 2;
  } catch (const ConfigError& e) {
    std::cerr << "orkit: " << e.what() << "\n" << active->help();
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "orkit: " << e.what() << "\n";
    return 1;
  }
}
