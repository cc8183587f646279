#pragma once

#include <cstdint>
#include <vector>

#include "orkit/model.hpp"

namespace orkit {

// min c^T x  s.t.  rows[i] . x <sense_i> b[i],  lower <= x <= upper.
// Bounds may be infinite.
struct DenseLp {
  std::vector<double> c;
  std::vector<std::vector<double>> rows;
  std::vector<RowSense> senses;
  std::vector<double> b;
  std::vector<double> lower;
  std::vector<double> upper;

  std::size_t num_variables() const { return c.size(); }

  // Appends a variable and returns its 0-based index.
  std::size_t add_variable(double cost, double lb, double ub);
  void add_row(std::vector<double> coeffs, RowSense sense, double rhs);
};

enum class LpStatus { kOptimal, kInfeasible, kUnbounded };

struct LpSolution {
  LpStatus status = LpStatus::kInfeasible;
  std::vector<double> x;
  double objective = 0.0;
  std::int64_t pivots = 0;
};

// Two-phase primal simplex on a dense tableau with Bland's rule, so the
// returned vertex is a deterministic function of the input. Meant for small
// problems (a few hundred rows and columns).
LpSolution solve_dense_lp(const DenseLp& lp);

}  // namespace orkit
