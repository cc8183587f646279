#include "orkit/decomposition.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <string>

#include "orkit/errors.hpp"

namespace orkit {
namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

std::string describe(std::exception_ptr e) {
  try {
    std::rethrow_exception(e);
  } catch (const std::exception& ex) {
    return ex.what();
  } catch (...) {
    return "unknown failure";
  }
}

void validate_problem(const DecompositionProblem& p) {
  if (p.components == 0) throw ConfigError("decomposition problem has no components");
  if (p.lower.size() != p.upper.size() || p.lower.empty()) {
    throw ConfigError("decomposition problem needs matching, nonempty bounds");
  }
  for (std::size_t i = 0; i < p.lower.size(); ++i) {
    if (!std::isfinite(p.lower[i]) || !std::isfinite(p.upper[i]) || p.lower[i] > p.upper[i]) {
      throw ConfigError("decomposition box must be finite and ordered");
    }
  }
  if (!p.oracle) throw ConfigError("decomposition problem has no oracle");
  if (p.initial && p.initial->size() != p.lower.size()) {
    throw ConfigError("initial point has the wrong dimension");
  }
}

// State shared by the synchronous and asynchronous drivers. Both feed it
// results in the same order when alpha = 1 and one worker is used, so the
// iterate sequences coincide.
class Controller {
 public:
  Controller(const DecompositionProblem& p, const MasterConfig& cfg) : p_(p), cfg_(cfg) {
    validate_problem(p);
    models_.resize(p.components);
    for (std::size_t j = 0; j < p.components; ++j) models_[j].component = j;
    std::vector<double> x1(p.lower.size());
    if (p.initial) {
      x1 = *p.initial;
    } else {
      for (std::size_t i = 0; i < x1.size(); ++i) x1[i] = 0.5 * (p.lower[i] + p.upper[i]);
    }
    out_.iterates.push_back({1, std::move(x1)});
    out_.iterations = 1;
    pending_.push_back({});
  }

  std::size_t components() const { return p_.components; }
  std::int64_t latest() const { return out_.iterations; }
  const std::vector<double>& iterate(std::int64_t k) const { return out_.iterates[k - 1].x; }
  bool terminated() const { return terminated_; }

  // Applies one component result for iterate k. Returns true when iterate k
  // has now received all of its components.
  bool add_result(std::int64_t k, std::size_t j, OracleResult r) {
    const auto& x = iterate(k);
    if (r.subgradient.size() != x.size()) {
      throw OracleError(j, "subgradient has length " + std::to_string(r.subgradient.size()) +
                               ", expected " + std::to_string(x.size()));
    }
    if (!std::isfinite(r.value)) throw OracleError(j, "non-finite function value");
    if (models_[j].cuts.empty()) ++covered_;
    models_[j].cuts.push_back({x, r.value, std::move(r.subgradient)});
    ++out_.subproblems;
    Pending& pend = pending_[k - 1];
    pend.sum += r.value;
    if (++pend.received < p_.components) return false;
    if (pend.sum < best_) {
      best_ = pend.sum;
      incumbent_ = x;
    }
    check_gap();
    return true;
  }

  std::size_t received(std::int64_t k) const { return pending_[k - 1].received; }
  bool every_model_has_cut() const { return covered_ == p_.components; }

  // Solves the master and, unless that closes the gap or the iteration limit
  // is hit, registers and returns the next iterate.
  const std::vector<double>* advance() {
    if (terminated_) return nullptr;
    if (out_.iterations >= cfg_.max_iterations) {
      terminated_ = true;
      return nullptr;
    }
    std::span<const double> center;
    if (cfg_.trust_radius && !incumbent_.empty()) center = incumbent_;
    MasterResult m = solve_master(models_, p_.lower, p_.upper, cfg_, center);
    lower_bound_ = m.lower_bound;
    out_.lower_bounds.push_back(m.lower_bound);
    check_gap();
    if (terminated_) return nullptr;
    ++out_.iterations;
    out_.iterates.push_back({out_.iterations, std::move(m.x)});
    pending_.push_back({});
    return &out_.iterates.back().x;
  }

  SolveResult finish(PoolTrace trace) {
    out_.x = incumbent_;
    out_.value = best_;
    out_.lower_bound = lower_bound_;
    out_.converged = converged_;
    out_.trace = std::move(trace);
    return std::move(out_);
  }

 private:
  struct Pending {
    std::size_t received = 0;
    double sum = 0.0;
  };

  void check_gap() {
    if (best_ - lower_bound_ <= cfg_.tol * (1.0 + std::fabs(best_))) {
      converged_ = true;
      terminated_ = true;
    }
  }

  const DecompositionProblem& p_;
  const MasterConfig& cfg_;
  std::vector<ModelFunction> models_;
  std::size_t covered_ = 0;
  std::vector<Pending> pending_;
  double best_ = kInfinity;
  double lower_bound_ = -kInfinity;
  std::vector<double> incumbent_;
  bool terminated_ = false;
  bool converged_ = false;
  SolveResult out_;
};

std::vector<double> two_stage_dual(const TwoStageProblem& p, const Scenario& s,
                                   std::span<const double> x, double& recourse) {
  // max pi^T (h - T x)  s.t.  W^T pi <= q, pi >= 0, written as a minimization.
  const std::size_t m = p.w.size();
  DenseLp lp;
  for (std::size_t i = 0; i < m; ++i) lp.add_variable(-(s.h[i] - dot(p.t[i], x)), 0.0, kInfinity);
  for (std::size_t k = 0; k < p.q.size(); ++k) {
    std::vector<double> row(m);
    for (std::size_t i = 0; i < m; ++i) row[i] = p.w[i][k];
    lp.add_row(std::move(row), RowSense::kLessEqual, p.q[k]);
  }
  LpSolution sol = solve_dense_lp(lp);
  if (sol.status != LpStatus::kOptimal) throw Error("recourse problem is infeasible");
  recourse = -sol.objective;
  return sol.x;
}

}  // namespace

double Cut::at(std::span<const double> x) const {
  double v = value;
  for (std::size_t i = 0; i < x.size(); ++i) v += subgradient[i] * (x[i] - point[i]);
  return v;
}

double model_value(const ModelFunction& mf, std::span<const double> x) {
  if (mf.cuts.empty()) {
    throw UndefinedModel("model function " + std::to_string(mf.component) + " has no cuts");
  }
  double v = -kInfinity;
  for (const auto& cut : mf.cuts) v = std::max(v, cut.at(x));
  return v;
}

MasterResult solve_master(const std::vector<ModelFunction>& models, std::span<const double> lower,
                          std::span<const double> upper, const MasterConfig& cfg,
                          std::span<const double> center) {
  const std::size_t r = lower.size();
  if (upper.size() != r) throw DimensionMismatch("solve_master: bound lengths differ");
  DenseLp lp;
  for (std::size_t i = 0; i < r; ++i) {
    double lo = lower[i];
    double hi = upper[i];
    if (!std::isfinite(lo) || !std::isfinite(hi)) throw ConfigError("solve_master: box must be finite");
    if (cfg.trust_radius && !center.empty()) {
      lo = std::max(lo, center[i] - *cfg.trust_radius);
      hi = std::min(hi, center[i] + *cfg.trust_radius);
    }
    lp.add_variable(0.0, lo, hi);
  }
  for (const auto& mf : models) {
    if (mf.cuts.empty()) {
      throw UndefinedModel("model function " + std::to_string(mf.component) + " has no cuts");
    }
    lp.add_variable(1.0, -kInfinity, kInfinity);
  }
  // g^T x - theta_j <= g^T point - f(point)
  for (std::size_t j = 0; j < models.size(); ++j) {
    for (const auto& cut : models[j].cuts) {
      std::vector<double> row(lp.num_variables(), 0.0);
      for (std::size_t i = 0; i < r; ++i) row[i] = cut.subgradient[i];
      row[r + j] = -1.0;
      lp.add_row(std::move(row), RowSense::kLessEqual, dot(cut.subgradient, cut.point) - cut.value);
    }
  }
  LpSolution sol = cfg.solver ? cfg.solver(lp) : solve_dense_lp(lp);
  if (sol.status != LpStatus::kOptimal) throw ConfigError("master problem has no optimal solution");
  MasterResult out;
  out.x.assign(sol.x.begin(), sol.x.begin() + static_cast<std::ptrdiff_t>(r));
  out.lower_bound = sol.objective;
  return out;
}

SolveResult sync_solve(const DecompositionProblem& problem, const MasterConfig& cfg,
                       const WorkerPoolConfig& pool) {
  Controller ctl(problem, cfg);
  PoolTrace trace;
  trace.workers = pool.workers;
  double clock = 0.0;
  for (;;) {
    const std::int64_t k = ctl.latest();
    const std::vector<double> x = ctl.iterate(k);
    PoolTrace round;
    auto results = parallel_map<OracleResult>(
        problem.components, [&](std::size_t j) { return problem.oracle(j, x); }, pool, &round);
    double round_end = clock;
    for (auto e : round.events) {
      e.time += clock;
      e.tag = k;
      round_end = std::max(round_end, e.time);
      trace.events.push_back(e);
    }
    clock = round_end;
    for (std::size_t j = 0; j < results.size(); ++j) {
      if (!results[j].ok()) throw OracleError(j, describe(results[j].error));
    }
    for (std::size_t j = 0; j < results.size(); ++j) ctl.add_result(k, j, std::move(*results[j].value));
    if (ctl.terminated()) break;
    const bool more = ctl.advance() != nullptr;
    trace.record(EventKind::kMaster, clock, -1, 0, k);
    if (!more) break;
  }
  return ctl.finish(std::move(trace));
}

SolveResult async_solve(const DecompositionProblem& problem, const MasterConfig& cfg,
                        const WorkerPoolConfig& pool) {
  if (!(cfg.alpha > 0.0 && cfg.alpha <= 1.0)) throw ConfigError("alpha must lie in (0, 1]");
  Controller ctl(problem, cfg);
  const std::size_t n = problem.components;
  const auto need = static_cast<std::size_t>(std::ceil(cfg.alpha * static_cast<double>(n) - 1e-12));
  std::vector<char> triggered{0};
  PoolTrace trace;

  auto enqueue = [&](TaskQueue& queue, std::int64_t k) {
    auto x = std::make_shared<const std::vector<double>>(ctl.iterate(k));
    for (std::size_t j = 0; j < n; ++j) {
      queue.push_back({j, k, [&problem, x, j]() -> std::any { return problem.oracle(j, *x); }});
    }
  };

  TaskQueue queue;
  enqueue(queue, 1);
  run_task_pool(
      queue, [&] { return ctl.terminated(); },
      [&](const PoolTask& task, PoolOutcome& outcome, TaskQueue& q) {
        if (outcome.error) throw OracleError(task.key, describe(outcome.error));
        const std::int64_t k = task.tag;
        ctl.add_result(k, task.key, std::any_cast<OracleResult>(std::move(outcome.value)));
        if (ctl.terminated() || k != ctl.latest() || triggered[k - 1]) return;
        if (ctl.received(k) < need || !ctl.every_model_has_cut()) return;
        triggered[k - 1] = 1;
        const bool more = ctl.advance() != nullptr;
        trace.record(EventKind::kMaster, outcome.completed, -1, 0, k);
        if (!more) return;
        triggered.push_back(0);
        enqueue(q, ctl.latest());
      },
      pool, &trace);
  return ctl.finish(std::move(trace));
}

DecompositionProblem abs_sum_problem(std::vector<std::vector<double>> centers,
                                     std::vector<double> lower, std::vector<double> upper) {
  for (const auto& c : centers) {
    if (c.size() != lower.size()) throw ConfigError("abs_sum: center dimension differs from box");
  }
  DecompositionProblem p;
  p.name = "abs_sum";
  p.components = centers.size();
  p.lower = std::move(lower);
  p.upper = std::move(upper);
  p.oracle = [centers = std::move(centers)](std::size_t j, std::span<const double> x) {
    OracleResult r;
    r.subgradient.resize(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double d = x[i] - centers[j][i];
      r.value += std::fabs(d);
      r.subgradient[i] = d > 0.0 ? 1.0 : (d < 0.0 ? -1.0 : 0.0);
    }
    return r;
  };
  return p;
}

void TwoStageProblem::validate() const {
  const std::size_t r = c.size();
  const std::size_t m = w.size();
  if (r == 0 || m == 0 || q.empty()) throw ConfigError("two_stage: empty problem data");
  if (t.size() != m) throw ConfigError("two_stage: W and T need the same row count");
  for (const auto& row : w) {
    if (row.size() != q.size()) throw ConfigError("two_stage: W row length differs from q");
  }
  for (const auto& row : t) {
    if (row.size() != r) throw ConfigError("two_stage: T row length differs from c");
  }
  if (lower.size() != r || upper.size() != r) throw ConfigError("two_stage: bounds differ from c");
  if (scenarios.empty()) throw ConfigError("two_stage: no scenarios");
  double total = 0.0;
  for (const auto& s : scenarios) {
    if (s.h.size() != m) throw ConfigError("two_stage: scenario h length differs from W rows");
    if (!(s.probability >= 0.0)) throw ConfigError("two_stage: negative probability");
    total += s.probability;
  }
  if (std::fabs(total - 1.0) > 1e-9) throw ConfigError("two_stage: probabilities must sum to 1");
}

TwoStageProblem two_stage_toy() {
  TwoStageProblem p;
  p.c = {2.0, 3.0};
  p.q = {3.0, 4.0};
  p.w = {{1.0, 0.0}, {0.0, 1.0}, {1.0, 1.0}};
  p.t = {{1.0, 0.0}, {0.0, 1.0}, {1.0, 1.0}};
  p.scenarios = {{0.5, {2.0, 3.0, 6.0}}, {0.5, {5.0, 1.0, 4.0}}};
  p.lower = {0.0, 0.0};
  p.upper = {10.0, 10.0};
  return p;
}

DecompositionProblem two_stage_decomposition(TwoStageProblem p) {
  p.validate();
  DecompositionProblem d;
  d.name = "two_stage";
  d.components = p.scenarios.size();
  d.lower = p.lower;
  d.upper = p.upper;
  d.oracle = [p = std::move(p)](std::size_t s, std::span<const double> x) {
    const Scenario& sc = p.scenarios[s];
    double recourse = 0.0;
    const std::vector<double> pi = two_stage_dual(p, sc, x, recourse);
    OracleResult r;
    r.value = sc.probability * (dot(p.c, x) + recourse);
    r.subgradient.resize(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
      double tpi = 0.0;
      for (std::size_t row = 0; row < p.t.size(); ++row) tpi += p.t[row][i] * pi[row];
      r.subgradient[i] = sc.probability * (p.c[i] - tpi);
    }
    return r;
  };
  return d;
}

DenseLp two_stage_extensive_form(const TwoStageProblem& p) {
  p.validate();
  DenseLp lp;
  const std::size_t r = p.c.size();
  for (std::size_t i = 0; i < r; ++i) lp.add_variable(p.c[i], p.lower[i], p.upper[i]);
  for (const auto& s : p.scenarios) {
    const std::size_t y0 = lp.num_variables();
    for (double qk : p.q) lp.add_variable(s.probability * qk, 0.0, kInfinity);
    for (std::size_t row = 0; row < p.w.size(); ++row) {
      std::vector<double> coeffs(lp.num_variables(), 0.0);
      for (std::size_t i = 0; i < r; ++i) coeffs[i] = p.t[row][i];
      for (std::size_t k = 0; k < p.q.size(); ++k) coeffs[y0 + k] = p.w[row][k];
      lp.add_row(std::move(coeffs), RowSense::kGreaterEqual, s.h[row]);
    }
  }
  return lp;
}

}  // namespace orkit
