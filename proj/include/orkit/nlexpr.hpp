#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "orkit/model.hpp"

namespace orkit {

enum class NodeKind : std::uint8_t {
  kConstant,
  kVariable,
  kSum,
  kNegate,
  kProduct,
  kPower,
  kSin,
  kCos,
};

// Exponent of a Power node, kept exact so that equivalence and domain checks
// do not depend on floating-point rounding. Always normalized: den > 0 and
// gcd(num, den) == 1.
struct Rational {
  std::int32_t num = 1;
  std::int32_t den = 1;

  Rational() = default;
  Rational(std::int32_t n, std::int32_t d = 1);

  double value() const { return static_cast<double>(num) / den; }
  bool is_integer() const { return den == 1; }

  bool operator==(const Rational&) const = default;
};

// Node of an algebraic expression tree. Leaves hold concrete values: a
// numeric constant or a 1-based model column.
struct ExpressionNode {
  NodeKind kind = NodeKind::kConstant;
  Rational exponent;       // kPower only
  double value = 0.0;      // kConstant only
  std::int64_t column = 0; // kVariable only
  std::vector<ExpressionNode> children;
};

namespace expr {

ExpressionNode constant(double value);
ExpressionNode variable(VariableRef v);
ExpressionNode sum(std::vector<ExpressionNode> terms);
ExpressionNode product(std::vector<ExpressionNode> factors);
ExpressionNode negate(ExpressionNode e);
ExpressionNode power(ExpressionNode base, Rational exponent);
ExpressionNode sin(ExpressionNode e);
ExpressionNode cos(ExpressionNode e);

}  // namespace expr

// Operator sugar. n-ary nodes are extended in place so that `a - b - c`
// becomes one Sum(a, -b, -c), like the tree a parser would produce.
ExpressionNode operator+(ExpressionNode a, ExpressionNode b);
ExpressionNode operator-(ExpressionNode a, ExpressionNode b);
ExpressionNode operator*(ExpressionNode a, ExpressionNode b);
ExpressionNode operator-(ExpressionNode a);

// Evaluates with x[c - 1] as the value of column c. Throws DomainError for a
// fractional power of a negative base.
double evaluate(const ExpressionNode& node, std::span<const double> x);

// Symbolic partial derivative with respect to `column`, with 0/1 folding and
// constant arithmetic. Throws UnsupportedOperator on unknown node kinds.
ExpressionNode differentiate(const ExpressionNode& node, std::int64_t column);

// Encoding of an expression up to a bijective renaming of its variables.
// Variables are numbered by first occurrence in a preorder walk;
// `slot_columns[s]` is the column bound to slot s.
struct CanonicalKey {
  std::string bytes;
  std::vector<std::int64_t> slot_columns;

  bool same_class(const CanonicalKey& other) const { return bytes == other.bytes; }
};

CanonicalKey canonical_key(const ExpressionNode& node);

std::string to_string(const ExpressionNode& node);

struct NonlinearConstraint {
  ExpressionNode root;
  RowSense sense = RowSense::kEqual;
};

// Constraints g_i(x) <sense> 0 given as expression trees.
class NonlinearModel {
 public:
  VariableRef add_variable(double lb, double ub);

  // Throws StaleReferenceError if the tree mentions an unissued column.
  std::int64_t add_constraint(ExpressionNode root, RowSense sense = RowSense::kEqual);

  void reserve(std::size_t vars, std::size_t rows);

  std::int64_t num_variables() const { return static_cast<std::int64_t>(lower_.size()); }
  std::int64_t num_constraints() const { return static_cast<std::int64_t>(rows_.size()); }
  const std::vector<double>& lower_bounds() const { return lower_; }
  const std::vector<double>& upper_bounds() const { return upper_; }
  const std::vector<NonlinearConstraint>& constraints() const { return rows_; }

 private:
  std::vector<double> lower_;
  std::vector<double> upper_;
  std::vector<NonlinearConstraint> rows_;
};

// g(x) for every row; senses are ignored.
std::vector<double> evaluate_constraints(const NonlinearModel& m, std::span<const double> x);

enum class TapeOp : std::uint8_t { kConst, kSlot, kAdd, kMul, kNeg, kPow, kSin, kCos };

struct TapeInstruction {
  TapeOp op = TapeOp::kConst;
  std::uint32_t first = 0;  // operand start in Tape::args, or the slot index
  std::uint32_t count = 0;  // operand count
  double value = 0.0;       // kConst
  Rational exponent;        // kPow
};

// Straight-line program. Instruction k writes register k; operands refer to
// earlier registers. The result is the last register.
struct Tape {
  std::vector<TapeInstruction> code;
  std::vector<std::uint32_t> args;

  // Evaluates with slot s bound to x[binding[s]].
  double run(std::span<const std::int64_t> binding, std::span<const double> x,
             std::vector<double>& registers) const;
};

// Sparse Jacobian evaluator. Rows whose trees are equivalent share one set of
// derivative tapes; each row only stores the columns bound to its slots.
class JacobianPlan {
 public:
  struct EquivalenceClass {
    std::int64_t representative_row = 0;
    std::vector<Tape> slot_tapes;
  };

  std::int64_t num_rows() const { return static_cast<std::int64_t>(row_class_.size()); }
  std::int64_t num_cols() const { return num_cols_; }
  std::int64_t nnz() const { return static_cast<std::int64_t>(columns_.size()); }

  // Row-wise structure; columns are 0-based and appear in first-occurrence
  // order within a row.
  const std::vector<std::int64_t>& row_ptr() const { return row_ptr_; }
  const std::vector<std::int64_t>& columns() const { return columns_; }
  const std::vector<std::int32_t>& row_class() const { return row_class_; }
  const std::vector<EquivalenceClass>& classes() const { return classes_; }

  // Calls made to differentiate() while compiling.
  std::int64_t differentiation_count() const { return differentiation_count_; }

  // Values aligned with columns(). Throws DimensionMismatch on bad lengths.
  std::vector<double> evaluate(std::span<const double> x) const;
  void evaluate(std::span<const double> x, std::span<double> values) const;

  CsrMatrix to_csr(std::span<const double> x) const;

 private:
  friend JacobianPlan compile_jacobian(const NonlinearModel& m);

  std::int64_t num_cols_ = 0;
  std::vector<std::int64_t> row_ptr_{0};
  std::vector<std::int64_t> columns_;
  std::vector<std::int32_t> row_class_;
  std::vector<EquivalenceClass> classes_;
  std::size_t max_tape_length_ = 0;
  std::int64_t differentiation_count_ = 0;
};

JacobianPlan compile_jacobian(const NonlinearModel& m);

// Compiles a derivative tree into a tape, mapping each column to its slot.
Tape compile_tape(const ExpressionNode& node, std::span<const std::int64_t> slot_columns);

}  // namespace orkit
