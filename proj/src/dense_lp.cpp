#include "orkit/dense_lp.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "orkit/errors.hpp"

namespace orkit {
namespace {

constexpr double kPivotTol = 1e-9;
constexpr double kCostTol = 1e-9;
constexpr double kFeasTol = 1e-7;
constexpr std::int64_t kMaxPivots = 1'000'000;

// x_j = offset + sum of sign * s_k over the standard-form columns listed.
struct Substitution {
  double offset = 0.0;
  std::size_t first = 0;
  double first_sign = 1.0;
  std::size_t second = 0;  // only used for free variables
  bool split = false;
};

class Tableau {
 public:
  Tableau(std::size_t m, std::size_t n) : m_(m), n_(n), t_(m * (n + 1), 0.0), basis_(m) {}

  double& at(std::size_t r, std::size_t c) { return t_[r * (n_ + 1) + c]; }
  double& rhs(std::size_t r) { return at(r, n_); }

  std::size_t rows() const { return m_; }
  std::size_t cols() const { return n_; }
  std::vector<std::size_t>& basis() { return basis_; }

  void pivot(std::size_t r, std::size_t e, std::vector<double>& cost) {
    const double p = at(r, e);
    for (std::size_t c = 0; c <= n_; ++c) at(r, c) /= p;
    at(r, e) = 1.0;
    for (std::size_t i = 0; i < m_; ++i) {
      if (i == r) continue;
      const double f = at(i, e);
      if (f == 0.0) continue;
      for (std::size_t c = 0; c <= n_; ++c) at(i, c) -= f * at(r, c);
      at(i, e) = 0.0;
    }
    const double f = cost[e];
    if (f != 0.0) {
      for (std::size_t c = 0; c <= n_; ++c) cost[c] -= f * at(r, c);
      cost[e] = 0.0;
    }
    basis_[r] = e;
  }

  // Runs Bland-rule pivots on `cost` (reduced costs, last entry = -objective)
  // over columns below `allowed`. Returns false if unbounded.
  bool optimize(std::vector<double>& cost, std::size_t allowed, std::int64_t& pivots) {
    for (;;) {
      std::size_t e = allowed;
      for (std::size_t j = 0; j < allowed; ++j) {
        if (cost[j] < -kCostTol) {
          e = j;
          break;
        }
      }
      if (e == allowed) return true;
      std::size_t leave = m_;
      double best = 0.0;
      for (std::size_t i = 0; i < m_; ++i) {
        const double a = at(i, e);
        if (a <= kPivotTol) continue;
        const double ratio = rhs(i) / a;
        if (leave == m_ || ratio < best - 1e-12 ||
            (ratio <= best + 1e-12 && basis_[i] < basis_[leave])) {
          leave = i;
          best = ratio;
        }
      }
      if (leave == m_) return false;
      pivot(leave, e, cost);
      if (++pivots > kMaxPivots) throw Error("solve_dense_lp: pivot limit exceeded");
    }
  }

 private:
  std::size_t m_;
  std::size_t n_;
  std::vector<double> t_;
  std::vector<std::size_t> basis_;
};

}  // namespace

std::size_t DenseLp::add_variable(double cost, double lb, double ub) {
  c.push_back(cost);
  lower.push_back(lb);
  upper.push_back(ub);
  for (auto& r : rows) r.push_back(0.0);
  return c.size() - 1;
}

void DenseLp::add_row(std::vector<double> coeffs, RowSense sense, double rhs) {
  coeffs.resize(c.size(), 0.0);
  rows.push_back(std::move(coeffs));
  senses.push_back(sense);
  b.push_back(rhs);
}

LpSolution solve_dense_lp(const DenseLp& lp) {
  const std::size_t n = lp.c.size();
  if (lp.lower.size() != n || lp.upper.size() != n || lp.rows.size() != lp.b.size() ||
      lp.senses.size() != lp.b.size()) {
    throw DimensionMismatch("solve_dense_lp: inconsistent problem arrays");
  }
  for (const auto& r : lp.rows) {
    if (r.size() != n) throw DimensionMismatch("solve_dense_lp: row length differs from cost");
  }

  // Shift and split variables so every standard-form column is >= 0.
  std::vector<Substitution> sub(n);
  std::size_t ns = 0;
  struct UpperRow {
    std::size_t col;
    double bound;
  };
  std::vector<UpperRow> upper_rows;
  for (std::size_t j = 0; j < n; ++j) {
    const double lo = lp.lower[j];
    const double hi = lp.upper[j];
    if (lo > hi) return {LpStatus::kInfeasible, {}, 0.0, 0};
    if (std::isfinite(lo)) {
      sub[j] = {lo, ns++, 1.0, 0, false};
      if (std::isfinite(hi)) upper_rows.push_back({sub[j].first, hi - lo});
    } else if (std::isfinite(hi)) {
      sub[j] = {hi, ns++, -1.0, 0, false};
    } else {
      sub[j].first = ns++;
      sub[j].second = ns++;
      sub[j].split = true;
    }
  }

  const std::size_t m = lp.rows.size() + upper_rows.size();
  std::vector<std::vector<double>> a(m, std::vector<double>(ns, 0.0));
  std::vector<double> rhs(m, 0.0);
  std::vector<RowSense> sense(m, RowSense::kLessEqual);
  for (std::size_t i = 0; i < lp.rows.size(); ++i) {
    double shift = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double v = lp.rows[i][j];
      if (v == 0.0) continue;
      shift += v * sub[j].offset;
      a[i][sub[j].first] += v * sub[j].first_sign;
      if (sub[j].split) a[i][sub[j].second] -= v;
    }
    rhs[i] = lp.b[i] - shift;
    sense[i] = lp.senses[i];
  }
  for (std::size_t k = 0; k < upper_rows.size(); ++k) {
    const std::size_t i = lp.rows.size() + k;
    a[i][upper_rows[k].col] = 1.0;
    rhs[i] = upper_rows[k].bound;
  }

  std::size_t slack_count = 0;
  for (auto s : sense) slack_count += s != RowSense::kEqual;
  const std::size_t art_begin = ns + slack_count;
  const std::size_t total = art_begin + m;

  Tableau tab(m, total);
  std::size_t slack = ns;
  for (std::size_t i = 0; i < m; ++i) {
    const double flip = rhs[i] < 0.0 ? -1.0 : 1.0;
    for (std::size_t j = 0; j < ns; ++j) tab.at(i, j) = flip * a[i][j];
    if (sense[i] != RowSense::kEqual) {
      tab.at(i, slack++) = flip * (sense[i] == RowSense::kLessEqual ? 1.0 : -1.0);
    }
    tab.at(i, art_begin + i) = 1.0;
    tab.rhs(i) = flip * rhs[i];
    tab.basis()[i] = art_begin + i;
  }

  LpSolution sol;
  // Phase 1: minimize the sum of artificials.
  std::vector<double> cost(total + 1, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < art_begin; ++j) cost[j] -= tab.at(i, j);
    cost[total] -= tab.rhs(i);
  }
  tab.optimize(cost, art_begin, sol.pivots);
  if (-cost[total] > kFeasTol * (1.0 + static_cast<double>(m))) {
    sol.status = LpStatus::kInfeasible;
    return sol;
  }
  // Drive remaining artificials out of the basis where possible; rows where
  // that fails are redundant and keep a zero artificial.
  for (std::size_t i = 0; i < m; ++i) {
    if (tab.basis()[i] < art_begin) continue;
    for (std::size_t j = 0; j < art_begin; ++j) {
      if (std::fabs(tab.at(i, j)) > kPivotTol) {
        tab.pivot(i, j, cost);
        ++sol.pivots;
        break;
      }
    }
  }

  // Phase 2 on the original objective expressed in standard-form columns.
  std::vector<double> cs(total, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    cs[sub[j].first] += lp.c[j] * sub[j].first_sign;
    if (sub[j].split) cs[sub[j].second] -= lp.c[j];
  }
  std::fill(cost.begin(), cost.end(), 0.0);
  for (std::size_t j = 0; j < art_begin; ++j) cost[j] = cs[j];
  for (std::size_t i = 0; i < m; ++i) {
    const double cb = cs[tab.basis()[i]];
    if (cb == 0.0) continue;
    for (std::size_t j = 0; j <= total; ++j) cost[j] -= cb * (j == total ? tab.rhs(i) : tab.at(i, j));
  }
  if (!tab.optimize(cost, art_begin, sol.pivots)) {
    sol.status = LpStatus::kUnbounded;
    return sol;
  }

  std::vector<double> s(total, 0.0);
  for (std::size_t i = 0; i < m; ++i) s[tab.basis()[i]] = tab.rhs(i);
  sol.x.resize(n);
  sol.objective = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    double v = sub[j].offset + sub[j].first_sign * s[sub[j].first];
    if (sub[j].split) v -= s[sub[j].second];
    sol.x[j] = v;
    sol.objective += lp.c[j] * v;
  }
  sol.status = LpStatus::kOptimal;
  return sol;
}

}  // namespace orkit
