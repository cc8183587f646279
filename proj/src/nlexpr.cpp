#include "orkit/nlexpr.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <numeric>
#include <string>
#include <unordered_map>

#include "orkit/errors.hpp"

namespace orkit {

Rational::Rational(std::int32_t n, std::int32_t d) {
  if (d == 0) throw DomainError("rational exponent with zero denominator");
  if (d < 0) {
    n = -n;
    d = -d;
  }
  const std::int32_t g = std::gcd(n, d);
  num = g == 0 ? n : n / g;
  den = g == 0 ? d : d / g;
}

namespace {

ExpressionNode leaf_constant(double v) {
  ExpressionNode n;
  n.kind = NodeKind::kConstant;
  n.value = v;
  return n;
}

ExpressionNode unary(NodeKind kind, ExpressionNode child) {
  ExpressionNode n;
  n.kind = kind;
  n.children.push_back(std::move(child));
  return n;
}

ExpressionNode nary(NodeKind kind, std::vector<ExpressionNode> children) {
  ExpressionNode n;
  n.kind = kind;
  n.children = std::move(children);
  return n;
}

double integer_power(double base, std::int64_t exponent) {
  if (exponent < 0) return 1.0 / integer_power(base, -exponent);
  double result = 1.0;
  while (exponent > 0) {
    if (exponent & 1) result *= base;
    base *= base;
    exponent >>= 1;
  }
  return result;
}

double rational_power(double base, Rational p) {
  if (p.is_integer()) return integer_power(base, p.num);
  if (base < 0.0) {
    throw DomainError("fractional power of a negative base");
  }
  if (p.den == 2) return integer_power(std::sqrt(base), p.num);
  return std::pow(base, p.value());
}

bool is_constant(const ExpressionNode& n, double v) {
  return n.kind == NodeKind::kConstant && n.value == v;
}

// Simplifying constructors used by differentiate(). They fold 0 and 1 and
// combine constant operands but never reorder the non-constant ones.
ExpressionNode make_sum(std::vector<ExpressionNode> terms) {
  std::vector<ExpressionNode> out;
  out.reserve(terms.size());
  double folded = 0.0;
  bool have_constant = false;
  for (auto& t : terms) {
    if (t.kind == NodeKind::kConstant) {
      folded += t.value;
      have_constant = true;
    } else {
      out.push_back(std::move(t));
    }
  }
  if (out.empty()) return leaf_constant(have_constant ? folded : 0.0);
  if (have_constant && folded != 0.0) out.push_back(leaf_constant(folded));
  if (out.size() == 1) return std::move(out.front());
  return nary(NodeKind::kSum, std::move(out));
}

ExpressionNode make_product(std::vector<ExpressionNode> factors) {
  std::vector<ExpressionNode> out;
  out.reserve(factors.size() + 1);
  double folded = 1.0;
  for (auto& f : factors) {
    if (f.kind == NodeKind::kConstant) {
      if (f.value == 0.0) return leaf_constant(0.0);
      folded *= f.value;
    } else {
      out.push_back(std::move(f));
    }
  }
  if (out.empty()) return leaf_constant(folded);
  if (folded != 1.0) out.insert(out.begin(), leaf_constant(folded));
  if (out.size() == 1) return std::move(out.front());
  return nary(NodeKind::kProduct, std::move(out));
}

ExpressionNode make_negate(ExpressionNode e) {
  if (e.kind == NodeKind::kConstant) return leaf_constant(e.value == 0.0 ? 0.0 : -e.value);
  if (e.kind == NodeKind::kNegate) return std::move(e.children.front());
  return unary(NodeKind::kNegate, std::move(e));
}

void check_arity(const ExpressionNode& n, std::size_t expected) {
  if (n.children.size() != expected) {
    throw UnsupportedOperator("malformed expression node: wrong number of children");
  }
}

void append_raw(std::string& out, const void* data, std::size_t size) {
  out.append(static_cast<const char*>(data), size);
}

class KeyBuilder {
 public:
  explicit KeyBuilder(CanonicalKey& key) : key_(key) {}

  void visit(const ExpressionNode& n) {
    key_.bytes.push_back(static_cast<char>(n.kind));
    switch (n.kind) {
      case NodeKind::kConstant: {
        std::uint64_t bits = 0;
        std::memcpy(&bits, &n.value, sizeof bits);
        append_raw(key_.bytes, &bits, sizeof bits);
        return;
      }
      case NodeKind::kVariable: {
        const std::uint32_t s = slot(n.column);
        append_raw(key_.bytes, &s, sizeof s);
        return;
      }
      case NodeKind::kSum:
      case NodeKind::kProduct: {
        const auto count = static_cast<std::uint32_t>(n.children.size());
        append_raw(key_.bytes, &count, sizeof count);
        break;
      }
      case NodeKind::kPower:
        append_raw(key_.bytes, &n.exponent.num, sizeof n.exponent.num);
        append_raw(key_.bytes, &n.exponent.den, sizeof n.exponent.den);
        break;
      case NodeKind::kNegate:
      case NodeKind::kSin:
      case NodeKind::kCos:
        break;
    }
    for (const auto& c : n.children) visit(c);
  }

 private:
  std::uint32_t slot(std::int64_t column) {
    auto& cols = key_.slot_columns;
    if (cols.size() < kLinearScanLimit) {
      for (std::size_t s = 0; s < cols.size(); ++s) {
        if (cols[s] == column) return static_cast<std::uint32_t>(s);
      }
      cols.push_back(column);
      if (cols.size() == kLinearScanLimit) {
        for (std::size_t s = 0; s < cols.size(); ++s) index_.emplace(cols[s], s);
      }
      return static_cast<std::uint32_t>(cols.size() - 1);
    }
    auto [it, inserted] = index_.try_emplace(column, cols.size());
    if (inserted) cols.push_back(column);
    return static_cast<std::uint32_t>(it->second);
  }

  static constexpr std::size_t kLinearScanLimit = 32;
  CanonicalKey& key_;
  std::unordered_map<std::int64_t, std::size_t> index_;
};

class TapeBuilder {
 public:
  TapeBuilder(Tape& tape, std::span<const std::int64_t> slot_columns)
      : tape_(tape), slot_columns_(slot_columns) {}

  std::uint32_t emit(const ExpressionNode& n) {
    TapeInstruction ins;
    switch (n.kind) {
      case NodeKind::kConstant:
        ins.op = TapeOp::kConst;
        ins.value = n.value;
        return push(ins);
      case NodeKind::kVariable:
        ins.op = TapeOp::kSlot;
        ins.first = slot_of(n.column);
        return push(ins);
      case NodeKind::kSum:
        ins.op = TapeOp::kAdd;
        break;
      case NodeKind::kProduct:
        ins.op = TapeOp::kMul;
        break;
      case NodeKind::kNegate:
        ins.op = TapeOp::kNeg;
        check_arity(n, 1);
        break;
      case NodeKind::kPower:
        ins.op = TapeOp::kPow;
        ins.exponent = n.exponent;
        check_arity(n, 1);
        break;
      case NodeKind::kSin:
        ins.op = TapeOp::kSin;
        check_arity(n, 1);
        break;
      case NodeKind::kCos:
        ins.op = TapeOp::kCos;
        check_arity(n, 1);
        break;
      default:
        throw UnsupportedOperator("cannot compile node kind " +
                                  std::to_string(static_cast<int>(n.kind)));
    }
    if (n.children.empty()) throw UnsupportedOperator("n-ary node without operands");
    std::vector<std::uint32_t> operands;
    operands.reserve(n.children.size());
    for (const auto& c : n.children) operands.push_back(emit(c));
    ins.first = static_cast<std::uint32_t>(tape_.args.size());
    ins.count = static_cast<std::uint32_t>(operands.size());
    tape_.args.insert(tape_.args.end(), operands.begin(), operands.end());
    return push(ins);
  }

 private:
  std::uint32_t push(const TapeInstruction& ins) {
    tape_.code.push_back(ins);
    return static_cast<std::uint32_t>(tape_.code.size() - 1);
  }

  std::uint32_t slot_of(std::int64_t column) const {
    for (std::size_t s = 0; s < slot_columns_.size(); ++s) {
      if (slot_columns_[s] == column) return static_cast<std::uint32_t>(s);
    }
    throw UnsupportedOperator("derivative references column " + std::to_string(column) +
                              " outside the expression's variables");
  }

  Tape& tape_;
  std::span<const std::int64_t> slot_columns_;
};

void check_columns(const ExpressionNode& n, std::int64_t num_vars) {
  if (n.kind == NodeKind::kVariable && (n.column < 1 || n.column > num_vars)) {
    throw StaleReferenceError("expression references column " + std::to_string(n.column) +
                              " that the model has not issued");
  }
  for (const auto& c : n.children) check_columns(c, num_vars);
}

void write_node(const ExpressionNode& n, std::string& out) {
  auto list = [&](const char* name) {
    out += name;
    out += '(';
    for (std::size_t i = 0; i < n.children.size(); ++i) {
      if (i > 0) out += ", ";
      write_node(n.children[i], out);
    }
    out += ')';
  };
  switch (n.kind) {
    case NodeKind::kConstant: {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.17g", n.value);
      out += buf;
      return;
    }
    case NodeKind::kVariable:
      out += 'x';
      out += std::to_string(n.column);
      return;
    case NodeKind::kSum:
      return list("sum");
    case NodeKind::kProduct:
      return list("prod");
    case NodeKind::kNegate:
      return list("neg");
    case NodeKind::kSin:
      return list("sin");
    case NodeKind::kCos:
      return list("cos");
    case NodeKind::kPower:
      out += "pow(";
      if (!n.children.empty()) write_node(n.children.front(), out);
      out += ", " + std::to_string(n.exponent.num);
      if (n.exponent.den != 1) out += "/" + std::to_string(n.exponent.den);
      out += ')';
      return;
  }
  out += "?";
}

}  // namespace

namespace expr {

ExpressionNode constant(double value) { return leaf_constant(value); }

ExpressionNode variable(VariableRef v) {
  ExpressionNode n;
  n.kind = NodeKind::kVariable;
  n.column = v.column;
  return n;
}

ExpressionNode sum(std::vector<ExpressionNode> terms) {
  return nary(NodeKind::kSum, std::move(terms));
}

ExpressionNode product(std::vector<ExpressionNode> factors) {
  return nary(NodeKind::kProduct, std::move(factors));
}

ExpressionNode negate(ExpressionNode e) { return unary(NodeKind::kNegate, std::move(e)); }

ExpressionNode power(ExpressionNode base, Rational exponent) {
  ExpressionNode n = unary(NodeKind::kPower, std::move(base));
  n.exponent = exponent;
  return n;
}

ExpressionNode sin(ExpressionNode e) { return unary(NodeKind::kSin, std::move(e)); }
ExpressionNode cos(ExpressionNode e) { return unary(NodeKind::kCos, std::move(e)); }

}  // namespace expr

ExpressionNode operator+(ExpressionNode a, ExpressionNode b) {
  if (a.kind == NodeKind::kSum) {
    a.children.push_back(std::move(b));
    return a;
  }
  return expr::sum({std::move(a), std::move(b)});
}

ExpressionNode operator-(ExpressionNode a, ExpressionNode b) {
  return std::move(a) + expr::negate(std::move(b));
}

ExpressionNode operator*(ExpressionNode a, ExpressionNode b) {
  if (a.kind == NodeKind::kProduct) {
    a.children.push_back(std::move(b));
    return a;
  }
  return expr::product({std::move(a), std::move(b)});
}

ExpressionNode operator-(ExpressionNode a) { return expr::negate(std::move(a)); }

double evaluate(const ExpressionNode& n, std::span<const double> x) {
  switch (n.kind) {
    case NodeKind::kConstant:
      return n.value;
    case NodeKind::kVariable:
      return x[n.column - 1];
    case NodeKind::kSum: {
      double s = 0.0;
      for (const auto& c : n.children) s += evaluate(c, x);
      return s;
    }
    case NodeKind::kProduct: {
      double p = 1.0;
      for (const auto& c : n.children) p *= evaluate(c, x);
      return p;
    }
    case NodeKind::kNegate:
      check_arity(n, 1);
      return -evaluate(n.children.front(), x);
    case NodeKind::kPower:
      check_arity(n, 1);
      return rational_power(evaluate(n.children.front(), x), n.exponent);
    case NodeKind::kSin:
      check_arity(n, 1);
      return std::sin(evaluate(n.children.front(), x));
    case NodeKind::kCos:
      check_arity(n, 1);
      return std::cos(evaluate(n.children.front(), x));
  }
  throw UnsupportedOperator("cannot evaluate node kind " +
                            std::to_string(static_cast<int>(n.kind)));
}

ExpressionNode differentiate(const ExpressionNode& n, std::int64_t column) {
  switch (n.kind) {
    case NodeKind::kConstant:
      return leaf_constant(0.0);
    case NodeKind::kVariable:
      return leaf_constant(n.column == column ? 1.0 : 0.0);
    case NodeKind::kSum: {
      std::vector<ExpressionNode> terms;
      terms.reserve(n.children.size());
      for (const auto& c : n.children) terms.push_back(differentiate(c, column));
      return make_sum(std::move(terms));
    }
    case NodeKind::kNegate:
      check_arity(n, 1);
      return make_negate(differentiate(n.children.front(), column));
    case NodeKind::kProduct: {
      // d(f1 f2 ... fk) = sum_i f1 ... fi' ... fk
      std::vector<ExpressionNode> terms;
      for (std::size_t i = 0; i < n.children.size(); ++i) {
        ExpressionNode di = differentiate(n.children[i], column);
        if (is_constant(di, 0.0)) continue;
        std::vector<ExpressionNode> factors;
        factors.reserve(n.children.size());
        for (std::size_t j = 0; j < n.children.size(); ++j) {
          factors.push_back(j == i ? std::move(di) : n.children[j]);
        }
        terms.push_back(make_product(std::move(factors)));
      }
      return make_sum(std::move(terms));
    }
    case NodeKind::kPower: {
      check_arity(n, 1);
      const ExpressionNode& base = n.children.front();
      ExpressionNode db = differentiate(base, column);
      if (is_constant(db, 0.0)) return db;
      const Rational p = n.exponent;
      const Rational lowered(p.num - p.den, p.den);
      ExpressionNode reduced = lowered.num == 0                 ? leaf_constant(1.0)
                               : lowered == Rational(1)         ? base
                                                                : expr::power(base, lowered);
      return make_product({leaf_constant(p.value()), std::move(reduced), std::move(db)});
    }
    case NodeKind::kSin: {
      check_arity(n, 1);
      ExpressionNode du = differentiate(n.children.front(), column);
      if (is_constant(du, 0.0)) return du;
      return make_product({expr::cos(n.children.front()), std::move(du)});
    }
    case NodeKind::kCos: {
      check_arity(n, 1);
      ExpressionNode du = differentiate(n.children.front(), column);
      if (is_constant(du, 0.0)) return du;
      return make_negate(make_product({expr::sin(n.children.front()), std::move(du)}));
    }
  }
  throw UnsupportedOperator("cannot differentiate node kind " +
                            std::to_string(static_cast<int>(n.kind)));
}

CanonicalKey canonical_key(const ExpressionNode& node) {
  CanonicalKey key;
  KeyBuilder(key).visit(node);
  return key;
}

std::string to_string(const ExpressionNode& node) {
  std::string out;
  write_node(node, out);
  return out;
}

VariableRef NonlinearModel::add_variable(double lb, double ub) {
  if (std::isnan(lb) || std::isnan(ub) || lb > ub || lb == kInfinity || ub == -kInfinity) {
    throw BoundOrderError("variable bounds out of order: lower bound exceeds upper bound");
  }
  lower_.push_back(lb);
  upper_.push_back(ub);
  return VariableRef{num_variables()};
}

std::int64_t NonlinearModel::add_constraint(ExpressionNode root, RowSense sense) {
  check_columns(root, num_variables());
  rows_.push_back(NonlinearConstraint{std::move(root), sense});
  return num_constraints();
}

void NonlinearModel::reserve(std::size_t vars, std::size_t rows) {
  lower_.reserve(vars);
  upper_.reserve(vars);
  rows_.reserve(rows);
}

std::vector<double> evaluate_constraints(const NonlinearModel& m, std::span<const double> x) {
  if (static_cast<std::int64_t>(x.size()) != m.num_variables()) {
    throw DimensionMismatch("evaluate_constraints: x has " + std::to_string(x.size()) +
                            " entries, model has " + std::to_string(m.num_variables()) +
                            " variables");
  }
  std::vector<double> g;
  g.reserve(m.constraints().size());
  for (const auto& c : m.constraints()) g.push_back(evaluate(c.root, x));
  return g;
}

double Tape::run(std::span<const std::int64_t> binding, std::span<const double> x,
                 std::vector<double>& r) const {
  if (r.size() < code.size()) r.resize(code.size());
  for (std::size_t k = 0; k < code.size(); ++k) {
    const TapeInstruction& ins = code[k];
    const std::uint32_t* a = args.data() + ins.first;
    switch (ins.op) {
      case TapeOp::kConst:
        r[k] = ins.value;
        break;
      case TapeOp::kSlot:
        r[k] = x[binding[ins.first]];
        break;
      case TapeOp::kAdd: {
        double s = r[a[0]];
        for (std::uint32_t i = 1; i < ins.count; ++i) s += r[a[i]];
        r[k] = s;
        break;
      }
      case TapeOp::kMul: {
        double p = r[a[0]];
        for (std::uint32_t i = 1; i < ins.count; ++i) p *= r[a[i]];
        r[k] = p;
        break;
      }
      case TapeOp::kNeg:
        r[k] = -r[a[0]];
        break;
      case TapeOp::kPow:
        r[k] = rational_power(r[a[0]], ins.exponent);
        break;
      case TapeOp::kSin:
        r[k] = std::sin(r[a[0]]);
        break;
      case TapeOp::kCos:
        r[k] = std::cos(r[a[0]]);
        break;
    }
  }
  return code.empty() ? 0.0 : r[code.size() - 1];
}

Tape compile_tape(const ExpressionNode& node, std::span<const std::int64_t> slot_columns) {
  Tape tape;
  TapeBuilder(tape, slot_columns).emit(node);
  return tape;
}

JacobianPlan compile_jacobian(const NonlinearModel& m) {
  JacobianPlan plan;
  plan.num_cols_ = m.num_variables();
  const auto& rows = m.constraints();
  plan.row_ptr_.reserve(rows.size() + 1);
  plan.row_class_.reserve(rows.size());

  std::unordered_map<std::string, std::int32_t> class_index;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    CanonicalKey key = canonical_key(rows[r].root);
    for (std::int64_t c : key.slot_columns) plan.columns_.push_back(c - 1);
    plan.row_ptr_.push_back(static_cast<std::int64_t>(plan.columns_.size()));

    auto [it, inserted] =
        class_index.try_emplace(std::move(key.bytes), static_cast<std::int32_t>(plan.classes_.size()));
    if (inserted) {
      JacobianPlan::EquivalenceClass cls;
      cls.representative_row = static_cast<std::int64_t>(r);
      cls.slot_tapes.reserve(key.slot_columns.size());
      for (std::int64_t column : key.slot_columns) {
        const ExpressionNode d = differentiate(rows[r].root, column);
        ++plan.differentiation_count_;
        cls.slot_tapes.push_back(compile_tape(d, key.slot_columns));
        plan.max_tape_length_ = std::max(plan.max_tape_length_, cls.slot_tapes.back().code.size());
      }
      plan.classes_.push_back(std::move(cls));
    }
    plan.row_class_.push_back(it->second);
  }
  return plan;
}

void JacobianPlan::evaluate(std::span<const double> x, std::span<double> values) const {
  if (static_cast<std::int64_t>(x.size()) != num_cols_) {
    throw DimensionMismatch("evaluate_jacobian: x has " + std::to_string(x.size()) +
                            " entries, expected " + std::to_string(num_cols_));
  }
  if (static_cast<std::int64_t>(values.size()) != nnz()) {
    throw DimensionMismatch("evaluate_jacobian: output buffer has wrong length");
  }
  std::vector<double> registers(max_tape_length_);
  for (std::size_t r = 0; r < row_class_.size(); ++r) {
    const auto& tapes = classes_[row_class_[r]].slot_tapes;
    const std::int64_t begin = row_ptr_[r];
    const std::span<const std::int64_t> binding(columns_.data() + begin, tapes.size());
    for (std::size_t s = 0; s < tapes.size(); ++s) {
      const Tape& t = tapes[s];
      values[begin + s] = t.code.size() == 1 && t.code[0].op == TapeOp::kConst
                              ? t.code[0].value
                              : t.run(binding, x, registers);
    }
  }
}

std::vector<double> JacobianPlan::evaluate(std::span<const double> x) const {
  std::vector<double> values(columns_.size());
  evaluate(x, values);
  return values;
}

CsrMatrix JacobianPlan::to_csr(std::span<const double> x) const {
  const std::vector<double> values = evaluate(x);
  CsrMatrix out;
  out.rows = num_rows();
  out.cols = num_cols_;
  out.row_ptr = row_ptr_;
  out.col_idx.resize(columns_.size());
  out.values.resize(columns_.size());
  std::vector<std::size_t> order;
  for (std::int64_t r = 0; r < out.rows; ++r) {
    const std::int64_t begin = row_ptr_[r];
    const std::int64_t end = row_ptr_[r + 1];
    order.resize(static_cast<std::size_t>(end - begin));
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return columns_[begin + a] < columns_[begin + b];
    });
    for (std::size_t k = 0; k < order.size(); ++k) {
      out.col_idx[begin + k] = columns_[begin + order[k]];
      out.values[begin + k] = values[begin + order[k]];
    }
  }
  return out;
}

}  // namespace orkit
