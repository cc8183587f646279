#include "orkit/format.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "orkit/errors.hpp"

namespace orkit {
namespace {

constexpr std::size_t kFlushThreshold = 1 << 20;

// Accumulates output in a string and hands it to the stream in large chunks.
class Sink {
 public:
  explicit Sink(std::ostream& out) : out_(out) { buf_.reserve(kFlushThreshold + 4096); }

  std::string& buf() { return buf_; }

  void maybe_flush() {
    if (buf_.size() >= kFlushThreshold) flush();
  }

  std::int64_t finish() {
    flush();
    out_.flush();
    if (!out_) throw Error("model writer: output stream failed");
    return written_;
  }

 private:
  void flush() {
    out_.write(buf_.data(), static_cast<std::streamsize>(buf_.size()));
    if (!out_) throw Error("model writer: output stream failed");
    written_ += static_cast<std::int64_t>(buf_.size());
    buf_.clear();
  }

  std::ostream& out_;
  std::string buf_;
  std::int64_t written_ = 0;
};

int significant_digits(const char* first, const char* last) {
  int digits = 0;
  bool leading = true;
  for (const char* p = first; p != last && *p != 'e'; ++p) {
    if (*p < '0' || *p > '9') continue;
    if (leading && *p == '0') continue;
    leading = false;
    ++digits;
  }
  return digits;
}

const char* relation_text(RowSense s) {
  switch (s) {
    case RowSense::kLessEqual:
      return "<=";
    case RowSense::kGreaterEqual:
      return ">=";
    case RowSense::kEqual:
      break;
  }
  return "=";
}

char mps_row_type(RowSense s) {
  switch (s) {
    case RowSense::kLessEqual:
      return 'L';
    case RowSense::kGreaterEqual:
      return 'G';
    case RowSense::kEqual:
      break;
  }
  return 'E';
}

// First item carries its own sign; later ones are joined with " + "/" - ".
void append_signed(std::string& b, double value, bool& first, NumberFormat fmt) {
  if (first) {
    b += ' ';
    append_number(b, value, fmt);
    first = false;
  } else if (std::signbit(value)) {
    b += " - ";
    append_number(b, -value, fmt);
  } else {
    b += " + ";
    append_number(b, value, fmt);
  }
}

void append_term(std::string& b, double coeff, const std::string& name, bool& first,
                 NumberFormat fmt) {
  append_signed(b, coeff, first, fmt);
  b += ' ';
  b += name;
}

}  // namespace

void append_number(std::string& out, double value, NumberFormat fmt) {
  char buf[64];
  std::to_chars_result r;
  if (value == std::trunc(value) && std::fabs(value) < 1e15) {
    r = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::fixed);
  } else {
    r = std::to_chars(buf, buf + sizeof buf, value);
    if (std::isfinite(value) && significant_digits(buf, r.ptr) > fmt.max_digits) {
      r = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general,
                        fmt.max_digits);
    }
  }
  out.append(buf, r.ptr);
}

std::string format_number(double value, NumberFormat fmt) {
  std::string s;
  append_number(s, value, fmt);
  return s;
}

bool parse_number(std::string_view text, double& value) {
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  if (text.empty()) return false;
  const auto r = std::from_chars(text.data(), text.data() + text.size(), value);
  return r.ec == std::errc() && r.ptr == text.data() + text.size();
}

std::int64_t write_lp(const Model& m, std::ostream& out, NumberFormat fmt) {
  Sink sink(out);
  std::string& b = sink.buf();
  const std::int64_t n = m.num_variables();
  const auto& names = m.names();

  b += m.sense() == ObjectiveSense::kMaximize ? "Maximize\n" : "Minimize\n";
  b += " obj:";
  std::vector<double> objective(n, 0.0);
  for (std::size_t k = 0; k < m.objective().size(); ++k) {
    objective[m.objective().vars[k] - 1] += m.objective().coeffs[k];
  }
  bool first = true;
  for (std::int64_t c = 0; c < n; ++c) {
    append_term(b, objective[c], names[c], first, fmt);
    sink.maybe_flush();
  }
  if (m.objective().constant != 0.0) append_signed(b, m.objective().constant, first, fmt);
  b += '\n';

  b += "Subject To\n";
  std::vector<std::int64_t> slot(n, -1);
  std::vector<std::int64_t> order;
  std::vector<double> merged;
  for (std::int64_t i = 0; i < m.num_constraints(); ++i) {
    const auto& row = m.rows()[i];
    order.clear();
    merged.clear();
    for (std::size_t k = 0; k < row.expr.size(); ++k) {
      const std::int64_t c = row.expr.vars[k] - 1;
      if (slot[c] < 0) {
        slot[c] = static_cast<std::int64_t>(order.size());
        order.push_back(c);
        merged.push_back(row.expr.coeffs[k]);
      } else {
        merged[slot[c]] += row.expr.coeffs[k];
      }
    }
    b += " c";
    b += std::to_string(i + 1);
    b += ':';
    first = true;
    for (std::size_t k = 0; k < order.size(); ++k) {
      append_term(b, merged[k], names[order[k]], first, fmt);
      slot[order[k]] = -1;
    }
    if (order.empty()) b += " 0";
    b += ' ';
    b += relation_text(row.sense);
    b += ' ';
    append_number(b, 0.0 - row.expr.constant, fmt);
    b += '\n';
    sink.maybe_flush();
  }

  b += "Bounds\n";
  for (std::int64_t c = 0; c < n; ++c) {
    const double lb = m.lower_bounds()[c];
    const double ub = m.upper_bounds()[c];
    if (lb == 0.0 && ub == kInfinity) continue;
    b += ' ';
    if (lb == -kInfinity && ub == kInfinity) {
      b += names[c];
      b += " free";
    } else if (lb == ub) {
      b += names[c];
      b += " = ";
      append_number(b, lb, fmt);
    } else if (ub == kInfinity) {
      b += names[c];
      b += " >= ";
      append_number(b, lb, fmt);
    } else {
      append_number(b, lb, fmt);
      b += " <= ";
      b += names[c];
      b += " <= ";
      append_number(b, ub, fmt);
    }
    b += '\n';
    sink.maybe_flush();
  }
  b += "End\n";
  return sink.finish();
}

std::int64_t write_mps(const Model& m, std::ostream& out, NumberFormat fmt) {
  const ColumnForm cf = to_column_form(m);
  Sink sink(out);
  std::string& b = sink.buf();
  const auto& names = m.names();
  const std::int64_t n = cf.a.cols;

  b += "NAME\n";
  if (cf.sense == ObjectiveSense::kMaximize) b += "OBJSENSE\n MAX\n";
  b += "ROWS\n N  obj\n";
  for (std::size_t i = 0; i < cf.row_senses.size(); ++i) {
    b += ' ';
    b += mps_row_type(cf.row_senses[i]);
    b += "  c";
    b += std::to_string(i + 1);
    b += '\n';
    sink.maybe_flush();
  }

  b += "COLUMNS\n";
  for (std::int64_t c = 0; c < n; ++c) {
    const std::int64_t begin = cf.a.col_ptr[c];
    const std::int64_t end = cf.a.col_ptr[c + 1];
    // A column with no entries anywhere still has to be declared.
    if (cf.objective_present[c] || begin == end) {
      b += ' ';
      b += names[c];
      b += " obj ";
      append_number(b, cf.objective[c], fmt);
      b += '\n';
    }
    for (std::int64_t p = begin; p < end; ++p) {
      b += ' ';
      b += names[c];
      b += " c";
      b += std::to_string(cf.a.row_idx[p] + 1);
      b += ' ';
      append_number(b, cf.a.values[p], fmt);
      b += '\n';
    }
    sink.maybe_flush();
  }

  b += "RHS\n";
  if (cf.objective_constant != 0.0) {
    b += " RHS obj ";
    append_number(b, 0.0 - cf.objective_constant, fmt);
    b += '\n';
  }
  for (std::size_t i = 0; i < cf.rhs.size(); ++i) {
    if (cf.rhs[i] == 0.0) continue;
    b += " RHS c";
    b += std::to_string(i + 1);
    b += ' ';
    append_number(b, cf.rhs[i], fmt);
    b += '\n';
    sink.maybe_flush();
  }

  b += "BOUNDS\n";
  for (std::int64_t c = 0; c < n; ++c) {
    const double lb = cf.lower[c];
    const double ub = cf.upper[c];
    auto line = [&](const char* type, const double* value) {
      b += ' ';
      b += type;
      b += " BND ";
      b += names[c];
      if (value != nullptr) {
        b += ' ';
        append_number(b, *value, fmt);
      }
      b += '\n';
    };
    if (lb == -kInfinity && ub == kInfinity) {
      line("FR", nullptr);
    } else if (lb == ub) {
      line("FX", &lb);
    } else {
      if (lb == -kInfinity) {
        line("MI", nullptr);
      } else if (lb != 0.0) {
        line("LO", &lb);
      }
      if (ub != kInfinity) line("UP", &ub);
    }
    sink.maybe_flush();
  }
  b += "ENDATA\n";
  return sink.finish();
}

std::string write_lp_string(const Model& m, NumberFormat fmt) {
  std::ostringstream os;
  write_lp(m, os, fmt);
  return std::move(os).str();
}

std::string write_mps_string(const Model& m, NumberFormat fmt) {
  std::ostringstream os;
  write_mps(m, os, fmt);
  return std::move(os).str();
}

namespace {

enum class Section { kHeader, kObjective, kSubjectTo, kRows, kBounds, kDone };

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    std::size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

bool is_relation(std::string_view t) { return t == "<=" || t == ">=" || t == "="; }

bool is_keyword(std::string_view line, std::string_view word) {
  if (line.size() != word.size()) return false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (std::tolower(static_cast<unsigned char>(line[i])) !=
        std::tolower(static_cast<unsigned char>(word[i]))) {
      return false;
    }
  }
  return true;
}

class LpReader {
 public:
  Model read(std::istream& in) {
    std::string raw;
    Section section = Section::kHeader;
    while (std::getline(in, raw)) {
      ++line_no_;
      std::string_view line(raw);
      while (!line.empty() && std::isspace(static_cast<unsigned char>(line.back()))) {
        line.remove_suffix(1);
      }
      const auto tokens = split_ws(line);
      if (tokens.empty()) continue;
      switch (section) {
        case Section::kHeader:
          if (tokens.size() == 1 && is_keyword(tokens[0], "Maximize")) {
            model_ = Model(ObjectiveSense::kMaximize);
          } else if (tokens.size() == 1 && is_keyword(tokens[0], "Minimize")) {
            model_ = Model(ObjectiveSense::kMinimize);
          } else {
            fail("expected Maximize or Minimize");
          }
          section = Section::kObjective;
          break;
        case Section::kObjective: {
          if (tokens[0] != "obj:") fail("expected objective line 'obj:'");
          AffineExpression e;
          parse_terms(tokens, 1, tokens.size(), e);
          model_.set_objective(std::move(e));
          section = Section::kSubjectTo;
          break;
        }
        case Section::kSubjectTo:
          if (tokens.size() != 2 || !is_keyword(tokens[0], "Subject") ||
              !is_keyword(tokens[1], "To")) {
            fail("expected 'Subject To'");
          }
          section = Section::kRows;
          break;
        case Section::kRows:
          if (tokens.size() == 1 && is_keyword(tokens[0], "Bounds")) {
            section = Section::kBounds;
          } else if (tokens.size() == 1 && is_keyword(tokens[0], "End")) {
            section = Section::kDone;
          } else {
            parse_row(tokens);
          }
          break;
        case Section::kBounds:
          if (tokens.size() == 1 && is_keyword(tokens[0], "End")) {
            section = Section::kDone;
          } else {
            parse_bound(tokens);
          }
          break;
        case Section::kDone:
          fail("content after End");
      }
    }
    if (section != Section::kDone) {
      ++line_no_;
      fail("unexpected end of input");
    }
    return std::move(model_);
  }

 private:
  [[noreturn]] void fail(const std::string& what) const { throw ParseError(line_no_, what); }

  VariableRef column(std::string_view name) {
    auto it = columns_.find(std::string(name));
    if (it != columns_.end()) return it->second;
    const VariableRef v = model_.add_variable(0.0, kInfinity, std::string(name));
    columns_.emplace(std::string(name), v);
    return v;
  }

  double number(std::string_view t) const {
    double v = 0.0;
    if (!parse_number(t, v)) fail("malformed number '" + std::string(t) + "'");
    return v;
  }

  void parse_terms(const std::vector<std::string_view>& tokens, std::size_t begin,
                   std::size_t end, AffineExpression& e) {
    double sign = 1.0;
    bool have_sign = false;
    for (std::size_t i = begin; i < end; ++i) {
      const std::string_view t = tokens[i];
      if (t == "+" || t == "-") {
        if (have_sign) fail("repeated sign");
        sign = t == "-" ? -1.0 : 1.0;
        have_sign = true;
        continue;
      }
      double value = 0.0;
      if (parse_number(t, value)) {
        value = sign * value;
        double lookahead = 0.0;
        if (i + 1 < end && tokens[i + 1] != "+" && tokens[i + 1] != "-" &&
            !parse_number(tokens[i + 1], lookahead)) {
          add_to_expression(e, value, column(tokens[i + 1]));
          ++i;
        } else {
          add_to_expression(e, value);
        }
      } else {
        add_to_expression(e, sign, column(t));
      }
      sign = 1.0;
      have_sign = false;
    }
    if (have_sign) fail("dangling sign");
  }

  void parse_row(const std::vector<std::string_view>& tokens) {
    if (tokens[0].size() < 2 || tokens[0].back() != ':') fail("expected row label");
    std::size_t rel = 1;
    while (rel < tokens.size() && !is_relation(tokens[rel])) ++rel;
    if (rel + 2 != tokens.size()) fail("expected '<terms> <relation> <rhs>'");
    AffineExpression e;
    parse_terms(tokens, 1, rel, e);
    e.constant -= number(tokens[rel + 1]);
    const std::string_view r = tokens[rel];
    const RowSense sense = r == "<=" ? RowSense::kLessEqual
                           : r == ">=" ? RowSense::kGreaterEqual
                                       : RowSense::kEqual;
    model_.add_constraint(std::move(e), sense);
  }

  void set_bounds(VariableRef v, double lb, double ub) {
    try {
      model_.set_bounds(v, lb, ub);
    } catch (const BoundOrderError& e) {
      fail(e.what());
    }
  }

  void parse_bound(const std::vector<std::string_view>& t) {
    double value = 0.0;
    if (t.size() == 2 && is_keyword(t[1], "free")) {
      set_bounds(column(t[0]), -kInfinity, kInfinity);
    } else if (t.size() == 5 && t[1] == "<=" && t[3] == "<=") {
      set_bounds(column(t[2]), number(t[0]), number(t[4]));
    } else if (t.size() == 3 && !parse_number(t[0], value)) {
      const VariableRef v = column(t[0]);
      const double x = number(t[2]);
      const double lb = model_.lower_bound(v.column);
      const double ub = model_.upper_bound(v.column);
      if (t[1] == "=") {
        set_bounds(v, x, x);
      } else if (t[1] == ">=") {
        set_bounds(v, x, ub);
      } else if (t[1] == "<=") {
        set_bounds(v, lb, x);
      } else {
        fail("unrecognized bound relation");
      }
    } else if (t.size() == 3 && t[1] == "<=") {
      const VariableRef v = column(t[2]);
      set_bounds(v, number(t[0]), model_.upper_bound(v.column));
    } else {
      fail("unrecognized bound line");
    }
  }

  Model model_;
  std::unordered_map<std::string, VariableRef> columns_;
  std::size_t line_no_ = 0;
};

}  // namespace

Model read_lp(std::istream& in) { return LpReader().read(in); }

Model read_lp_string(std::string_view text) {
  std::istringstream in{std::string(text)};
  return read_lp(in);
}

}  // namespace orkit
