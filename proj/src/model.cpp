#include "orkit/model.hpp"

#include <cmath>
#include <string>
#include <unordered_map>

#include "orkit/errors.hpp"

namespace orkit {

namespace {

void check_bound_order(double lb, double ub) {
  if (std::isnan(lb) || std::isnan(ub) || lb > ub || lb == kInfinity || ub == -kInfinity) {
    throw BoundOrderError("variable bounds out of order: lower bound exceeds upper bound");
  }
}

}  // namespace

VariableRef Model::add_variable(double lb, double ub, std::optional<std::string> name) {
  check_bound_order(lb, ub);
  lower_.push_back(lb);
  upper_.push_back(ub);
  const std::int64_t column = num_variables();
  names_.push_back(name ? std::move(*name) : "x" + std::to_string(column));
  return VariableRef{column};
}

void Model::set_bounds(VariableRef v, double lb, double ub) {
  if (v.column < 1 || v.column > num_variables()) {
    throw StaleReferenceError("set_bounds: column " + std::to_string(v.column) +
                              " was not issued by this model");
  }
  check_bound_order(lb, ub);
  lower_[v.column - 1] = lb;
  upper_[v.column - 1] = ub;
}

void Model::check_columns(const AffineExpression& expr, const char* where) const {
  if (expr.vars.size() != expr.coeffs.size()) {
    throw DimensionMismatch(std::string(where) + ": vars/coeffs length mismatch");
  }
  const std::int64_t v = num_variables();
  for (std::int64_t column : expr.vars) {
    if (column < 1 || column > v) {
      throw StaleReferenceError(std::string(where) + ": column " + std::to_string(column) +
                                " was not issued by this model");
    }
  }
}

std::int64_t Model::add_constraint(AffineExpression expr, RowSense sense) {
  check_columns(expr, "add_constraint");
  rows_.push_back(Constraint{std::move(expr), sense});
  return num_constraints();
}

void Model::set_objective(AffineExpression expr) {
  check_columns(expr, "set_objective");
  objective_ = std::move(expr);
}

void Model::reserve(std::size_t vars, std::size_t rows) {
  lower_.reserve(vars);
  upper_.reserve(vars);
  names_.reserve(vars);
  rows_.reserve(rows);
}

std::int64_t Model::num_terms() const {
  std::int64_t total = 0;
  for (const auto& r : rows_) total += static_cast<std::int64_t>(r.expr.size());
  return total;
}

AffineExpression merge_duplicates(const AffineExpression& e) {
  AffineExpression out;
  out.constant = e.constant;
  out.reserve(e.size());
  std::unordered_map<std::int64_t, std::size_t> slot;
  slot.reserve(e.size());
  for (std::size_t k = 0; k < e.size(); ++k) {
    auto [it, inserted] = slot.try_emplace(e.vars[k], out.vars.size());
    if (inserted) {
      out.vars.push_back(e.vars[k]);
      out.coeffs.push_back(e.coeffs[k]);
    } else {
      out.coeffs[it->second] += e.coeffs[k];
    }
  }
  return out;
}

ColumnForm to_column_form(const Model& m) {
  ColumnForm cf;
  const std::int64_t n = m.num_variables();
  const std::int64_t rows = m.num_constraints();
  cf.sense = m.sense();
  cf.lower = m.lower_bounds();
  cf.upper = m.upper_bounds();
  cf.objective.assign(n, 0.0);
  cf.objective_present.assign(n, 0);
  for (std::size_t k = 0; k < m.objective().size(); ++k) {
    const std::int64_t c = m.objective().vars[k] - 1;
    cf.objective[c] += m.objective().coeffs[k];
    cf.objective_present[c] = 1;
  }
  cf.objective_constant = m.objective().constant;

  cf.row_senses.reserve(rows);
  cf.rhs.reserve(rows);
  for (const auto& r : m.rows()) {
    cf.row_senses.push_back(r.sense);
    cf.rhs.push_back(0.0 - r.expr.constant);  // never -0 for an empty constant
  }

  // Bucket terms by column. Rows are visited in order, so each bucket is
  // sorted by row and repeats of one (row, column) pair end up adjacent.
  CscMatrix& a = cf.a;
  a.rows = rows;
  a.cols = n;
  std::vector<std::int64_t> count(n + 1, 0);
  for (const auto& r : m.rows()) {
    for (std::int64_t c : r.expr.vars) ++count[c];
  }
  std::vector<std::int64_t> start(n + 1, 0);
  for (std::int64_t c = 0; c < n; ++c) start[c + 1] = start[c] + count[c + 1];
  std::vector<std::int64_t> raw_rows(start[n]);
  std::vector<double> raw_vals(start[n]);
  std::vector<std::int64_t> next(start.begin(), start.end() - 1);
  for (std::int64_t i = 0; i < rows; ++i) {
    const auto& e = m.rows()[i].expr;
    for (std::size_t k = 0; k < e.size(); ++k) {
      const std::int64_t p = next[e.vars[k] - 1]++;
      raw_rows[p] = i;
      raw_vals[p] = e.coeffs[k];
    }
  }

  a.col_ptr.assign(n + 1, 0);
  a.row_idx.reserve(raw_rows.size());
  a.values.reserve(raw_vals.size());
  for (std::int64_t c = 0; c < n; ++c) {
    for (std::int64_t p = start[c]; p < start[c + 1]; ++p) {
      if (p > start[c] && raw_rows[p] == a.row_idx.back()) {
        a.values.back() += raw_vals[p];
      } else {
        a.row_idx.push_back(raw_rows[p]);
        a.values.push_back(raw_vals[p]);
      }
    }
    a.col_ptr[c + 1] = static_cast<std::int64_t>(a.row_idx.size());
  }
  return cf;
}

}  // namespace orkit
