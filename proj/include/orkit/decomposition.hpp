#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "orkit/dense_lp.hpp"
#include "orkit/pool.hpp"

namespace orkit {

// Affine minorant f(point) + subgradient^T (x - point).
struct Cut {
  std::vector<double> point;
  double value = 0.0;
  std::vector<double> subgradient;

  double at(std::span<const double> x) const;
};

// Cutting-plane model of one component: the pointwise max of its cuts.
struct ModelFunction {
  std::size_t component = 0;
  std::vector<Cut> cuts;
};

// Throws UndefinedModel when mf has no cuts.
double model_value(const ModelFunction& mf, std::span<const double> x);

struct OracleResult {
  double value = 0.0;
  std::vector<double> subgradient;
};

// Evaluates component j at x. Must be safe to call concurrently.
using Oracle = std::function<OracleResult(std::size_t component, std::span<const double> x)>;

// min sum_j f_j(x) over the box lower <= x <= upper, f_j convex.
struct DecompositionProblem {
  std::string name;
  std::size_t components = 0;
  std::vector<double> lower;
  std::vector<double> upper;
  Oracle oracle;
  std::optional<std::vector<double>> initial;  // box midpoint when absent
};

using MasterSolver = std::function<LpSolution(const DenseLp&)>;

struct MasterConfig {
  double tol = 1e-6;
  // Proportion of an iterate's subproblems that must return before the next
  // iterate is generated. 1 gives the synchronous method.
  double alpha = 1.0;
  // Half-width of a fixed box around the incumbent, if set.
  std::optional<double> trust_radius;
  std::int64_t max_iterations = 1000;
  MasterSolver solver;  // solve_dense_lp when empty
};

struct MasterResult {
  std::vector<double> x;
  double lower_bound = 0.0;
};

// Minimizes sum_j model_value(models[j], x) over the box, intersected with
// the trust region around `center` when both are given. Throws UndefinedModel
// if a model has no cuts and ConfigError if the box is not finite or the LP
// is not solvable.
MasterResult solve_master(const std::vector<ModelFunction>& models, std::span<const double> lower,
                          std::span<const double> upper, const MasterConfig& cfg,
                          std::span<const double> center = {});

struct IterateRecord {
  std::int64_t k = 0;
  std::vector<double> x;

  bool operator==(const IterateRecord&) const = default;
};

struct SolveResult {
  std::vector<double> x;  // incumbent
  double value = 0.0;     // sum_j f_j at the incumbent
  double lower_bound = 0.0;
  bool converged = false;
  std::int64_t iterations = 0;  // iterates generated
  std::int64_t subproblems = 0;
  std::vector<IterateRecord> iterates;
  std::vector<double> lower_bounds;  // master value after each solve
  PoolTrace trace;
};

// Evaluate all components at x^k, add cuts, solve the master for x^{k+1};
// stop when best - lower_bound <= tol * (1 + |best|). Failures from the
// oracle are rethrown as OracleError naming the component.
SolveResult sync_solve(const DecompositionProblem& problem, const MasterConfig& cfg,
                       const WorkerPoolConfig& pool);

// Asynchronous variant: a new iterate is generated once ceil(alpha * n)
// results for the latest iterate are in, using every cut received so far.
// Results for older iterates still contribute cuts. The upper bound only
// uses iterates whose components have all returned.
SolveResult async_solve(const DecompositionProblem& problem, const MasterConfig& cfg,
                        const WorkerPoolConfig& pool);

// sum_j ||x - centers[j]||_1 over [lower, upper].
DecompositionProblem abs_sum_problem(std::vector<std::vector<double>> centers,
                                     std::vector<double> lower, std::vector<double> upper);

// Two-stage linear program with recourse
//   min c^T x + sum_s p_s Q_s(x),  Q_s(x) = min { q^T y : W y >= h_s - T x, y >= 0 }
// split into one component per scenario, p_s (c^T x + Q_s(x)). Recourse
// values and subgradients come from the dual of each scenario LP, so W must
// give complete recourse.
struct Scenario {
  double probability = 0.0;
  std::vector<double> h;
};

struct TwoStageProblem {
  std::vector<double> c;
  std::vector<double> q;
  std::vector<std::vector<double>> w;
  std::vector<std::vector<double>> t;
  std::vector<Scenario> scenarios;
  std::vector<double> lower;
  std::vector<double> upper;

  void validate() const;
};

TwoStageProblem two_stage_toy();
DecompositionProblem two_stage_decomposition(TwoStageProblem p);

// The deterministic equivalent of a two-stage problem as one LP. First-stage
// variables come first in the solution vector, then y for each scenario.
DenseLp two_stage_extensive_form(const TwoStageProblem& p);

}  // namespace orkit
