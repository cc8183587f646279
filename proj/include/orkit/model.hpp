#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "orkit/sparse.hpp"

namespace orkit {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

enum class ObjectiveSense { kMinimize, kMaximize };

// Relation of a normalized row `expr <sense> 0`.
enum class RowSense { kLessEqual, kEqual, kGreaterEqual };

// Handle to a model column. Columns are issued densely starting at 1.
struct VariableRef {
  std::int64_t column = 0;

  bool operator==(const VariableRef&) const = default;
};

// A sparse row stored as parallel index/coefficient lists plus a constant.
// Repeated columns are kept as separate terms until the model is converted
// to column form or written out.
struct AffineExpression {
  std::vector<std::int64_t> vars;
  std::vector<double> coeffs;
  double constant = 0.0;

  AffineExpression() = default;
  explicit AffineExpression(std::size_t size_hint) { reserve(size_hint); }

  void reserve(std::size_t n) {
    vars.reserve(n);
    coeffs.reserve(n);
  }

  std::size_t size() const { return vars.size(); }
  bool empty() const { return vars.empty(); }
};

// Appends coeff * v without merging against existing terms.
inline void add_to_expression(AffineExpression& e, double coeff, VariableRef v) {
  e.vars.push_back(v.column);
  e.coeffs.push_back(coeff);
}

// Folds a constant into the expression.
inline void add_to_expression(AffineExpression& e, double value) {
  e.constant += value;
}

struct Constraint {
  AffineExpression expr;
  RowSense sense = RowSense::kEqual;
};

// Linear model assembled row by row. Rows are kept in the normalized form
// `expr <sense> 0`, so a right-hand side b lives in expr.constant as -b.
class Model {
 public:
  explicit Model(ObjectiveSense sense = ObjectiveSense::kMinimize) : sense_(sense) {}

  // Throws BoundOrderError unless lb <= ub (NaN and inverted infinities are
  // rejected as well). Unnamed variables are called x<column>.
  VariableRef add_variable(double lb, double ub, std::optional<std::string> name = {});

  // Returns the 1-based row index. Throws StaleReferenceError if the
  // expression mentions a column this model has not issued.
  std::int64_t add_constraint(AffineExpression expr, RowSense sense);

  // Same validation as add_variable.
  void set_bounds(VariableRef v, double lb, double ub);

  void set_objective(AffineExpression expr);

  // Reserves space for a known number of variables/rows.
  void reserve(std::size_t vars, std::size_t rows);

  ObjectiveSense sense() const { return sense_; }
  std::int64_t num_variables() const { return static_cast<std::int64_t>(lower_.size()); }
  std::int64_t num_constraints() const { return static_cast<std::int64_t>(rows_.size()); }

  // Accessors take 1-based columns/rows.
  double lower_bound(std::int64_t column) const { return lower_[column - 1]; }
  double upper_bound(std::int64_t column) const { return upper_[column - 1]; }
  const std::string& name(std::int64_t column) const { return names_[column - 1]; }
  const Constraint& row(std::int64_t row) const { return rows_[row - 1]; }

  const std::vector<double>& lower_bounds() const { return lower_; }
  const std::vector<double>& upper_bounds() const { return upper_; }
  const std::vector<std::string>& names() const { return names_; }
  const std::vector<Constraint>& rows() const { return rows_; }
  const AffineExpression& objective() const { return objective_; }

  // Total stored terms across all rows, duplicates included.
  std::int64_t num_terms() const;

 private:
  void check_columns(const AffineExpression& expr, const char* where) const;

  ObjectiveSense sense_;
  std::vector<double> lower_;
  std::vector<double> upper_;
  std::vector<std::string> names_;
  AffineExpression objective_;
  std::vector<Constraint> rows_;
};

// Column-oriented snapshot of a Model with duplicate terms merged.
struct ColumnForm {
  ObjectiveSense sense = ObjectiveSense::kMinimize;
  CscMatrix a;  // 0-based storage; row r of the model is row r-1 here
  std::vector<RowSense> row_senses;
  std::vector<double> rhs;
  std::vector<double> lower;
  std::vector<double> upper;
  std::vector<double> objective;
  // Objective coefficient slots that were structurally present, in column
  // order. Lets writers tell an explicit zero from an absent column.
  std::vector<char> objective_present;
  double objective_constant = 0.0;
};

ColumnForm to_column_form(const Model& m);

// Merges duplicate columns of an expression, keeping first-occurrence order
// and summing coefficients in the order they were appended.
AffineExpression merge_duplicates(const AffineExpression& e);

}  // namespace orkit
