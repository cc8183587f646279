#include "orkit/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstring>
#include <istream>
#include <numeric>
#include <ostream>
#include <string_view>

#include <json.hpp>

#include "orkit/errors.hpp"
#include "orkit/format.hpp"

namespace orkit {
namespace {

constexpr NumberFormat kExact{17};

template <class T>
void append_list(std::string& out, const std::vector<T>& v) {
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ',';
    if constexpr (std::is_floating_point_v<T>) {
      append_number(out, v[i], kExact);
    } else {
      out += std::to_string(v[i]);
    }
  }
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = s.find(sep, start);
    if (pos == std::string_view::npos) {
      parts.push_back(s.substr(start));
      return parts;
    }
    parts.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
}

class FieldReader {
 public:
  FieldReader(std::size_t line) : line_(line) {}

  std::vector<double> doubles(std::string_view s) const {
    std::vector<double> out;
    if (s.empty()) return out;
    for (auto part : split(s, ',')) out.push_back(number(part));
    return out;
  }

  std::vector<std::int64_t> integers(std::string_view s) const {
    std::vector<std::int64_t> out;
    if (s.empty()) return out;
    for (auto part : split(s, ',')) {
      double v = number(part);
      if (v != std::floor(v)) fail("expected an integer");
      out.push_back(static_cast<std::int64_t>(v));
    }
    return out;
  }

  double number(std::string_view s) const {
    double v = 0.0;
    if (!parse_number(s, v)) fail("bad number '" + std::string(s) + "'");
    return v;
  }

  [[noreturn]] void fail(const std::string& what) const { throw ParseError(line_, what); }

 private:
  std::size_t line_;
};

SparseVector make_sparse(std::int64_t size, std::vector<std::int64_t> idx, std::vector<double> val,
                         const FieldReader& r) {
  if (idx.size() != val.size()) r.fail("sparse vector index/value counts differ");
  SparseVector v{size, std::move(idx), std::move(val)};
  try {
    v.validate();
  } catch (const Error& e) {
    r.fail(e.what());
  }
  return v;
}

void append_sparse(std::string& out, const SparseVector& v) {
  append_list(out, v.indices);
  out += '\t';
  append_list(out, v.values);
}

class Fnv {
 public:
  void bytes(const void* p, std::size_t n) {
    const auto* b = static_cast<const unsigned char*>(p);
    for (std::size_t i = 0; i < n; ++i) {
      h_ ^= b[i];
      h_ *= 0x100000001b3ULL;
    }
  }
  template <class T>
  void add(const T& v) {
    bytes(&v, sizeof v);
  }
  template <class T>
  void add(const std::vector<T>& v) {
    if (!v.empty()) bytes(v.data(), v.size() * sizeof(T));
  }
  std::uint64_t value() const { return h_; }

 private:
  std::uint64_t h_ = 0xcbf29ce484222325ULL;
};

// Dense copies of the sparse record vectors, prepared outside timed regions.
struct DenseInputs {
  std::vector<std::vector<double>> rho;
  std::vector<std::vector<double>> alpha;
  std::vector<std::vector<double>> axpy_x;
};

DenseInputs densify(const KernelTrace& t) {
  DenseInputs d;
  for (const auto& r : t.records) {
    d.rho.push_back(r.rho.to_dense());
    d.alpha.push_back(r.alpha.to_dense());
    d.axpy_x.push_back(r.axpy_x.to_dense());
  }
  return d;
}

}  // namespace

CscMatrix synthetic_matrix(const SyntheticSpec& spec) {
  if (spec.rows < 1 || spec.cols < 1) throw ConfigError("synthetic matrix needs positive dimensions");
  if (!(spec.column_density > 0.0 && spec.column_density <= 1.0)) {
    throw ConfigError("column density must lie in (0, 1]");
  }
  SplitMix64 rng(spec.seed);
  CscMatrix a;
  a.rows = spec.rows;
  a.cols = spec.cols;
  for (std::int64_t j = 0; j < spec.cols; ++j) {
    const std::size_t start = a.row_idx.size();
    for (std::int64_t i = 0; i < spec.rows; ++i) {
      if (rng.uniform() < spec.column_density) {
        a.row_idx.push_back(i);
        a.values.push_back(rng.uniform(-1.0, 1.0));
      }
    }
    if (a.row_idx.size() == start) {
      a.row_idx.push_back(static_cast<std::int64_t>(rng.below(spec.rows)));
      a.values.push_back(rng.uniform(-1.0, 1.0));
    }
    a.col_ptr.push_back(static_cast<std::int64_t>(a.row_idx.size()));
  }
  return a;
}

KernelTrace synthetic_trace(const CscMatrix& a, const SyntheticSpec& spec, std::string name) {
  a.validate();
  if (spec.iterations < 1) throw ConfigError("synthetic trace needs at least one iteration");
  if (!(spec.vector_density > 0.0 && spec.vector_density <= 1.0)) {
    throw ConfigError("vector density must lie in (0, 1]");
  }
  KernelTrace t;
  t.name = std::move(name);
  t.seed = spec.seed;
  t.a = a;
  t.a_rows = csc_to_csr(a);
  SplitMix64 rng(spec.seed ^ 0x5bd1e995ULL);
  const std::int64_t m = a.rows;
  const std::int64_t n = a.cols;
  const std::int64_t basic = std::min(m, n);
  std::vector<std::int64_t> perm(n);
  SparseAccumulator work;

  for (std::int64_t it = 0; it < spec.iterations; ++it) {
    KernelRecord r;
    r.rho.size = m;
    for (std::int64_t i = 0; i < m; ++i) {
      if (rng.uniform() < spec.vector_density) r.rho.push_back(i, rng.uniform(-1.0, 1.0));
    }
    if (r.rho.nnz() == 0) r.rho.push_back(static_cast<std::int64_t>(rng.below(m)), 1.0);

    // Partial Fisher-Yates picks the basic columns.
    std::iota(perm.begin(), perm.end(), 0);
    for (std::int64_t k = 0; k < basic; ++k) {
      const auto pick = k + static_cast<std::int64_t>(rng.below(n - k));
      std::swap(perm[k], perm[pick]);
    }
    r.flags.assign(n, 1);
    r.state.assign(n, VarState::kLower);
    for (std::int64_t k = 0; k < basic; ++k) {
      r.flags[perm[k]] = 0;
      r.state[perm[k]] = VarState::kBasic;
    }
    r.d.assign(n, 0.0);
    for (std::int64_t j = 0; j < n; ++j) {
      if (r.flags[j]) r.d[j] = rng.uniform(0.0, 1.0);
    }
    transpose_matvec_sparse(t.a_rows, r.rho, work, r.alpha);
    r.axpy_scale = -rng.uniform(0.0, 1.0);
    r.axpy_x = r.alpha;
    r.axpy_y = r.d;
    t.records.push_back(std::move(r));
  }
  return t;
}

KernelTrace synthetic_trace(const SyntheticSpec& spec) {
  return synthetic_trace(synthetic_matrix(spec), spec,
                         "synthetic-" + std::to_string(spec.rows) + "x" + std::to_string(spec.cols));
}

void write_trace(const KernelTrace& t, std::ostream& out) {
  nlohmann::ordered_json header;
  header["format"] = kTraceFormat;
  header["name"] = t.name;
  header["rows"] = t.a.rows;
  header["cols"] = t.a.cols;
  header["nnz"] = t.a.nnz();
  header["records"] = t.records.size();
  header["seed"] = t.seed;
  header["rng"] = SplitMix64::kName;
  std::string line = header.dump();
  line += '\n';
  out << line;

  line = "matrix\t";
  append_list(line, t.a.col_ptr);
  line += '\t';
  append_list(line, t.a.row_idx);
  line += '\t';
  append_list(line, t.a.values);
  line += '\n';
  out << line;

  for (const auto& r : t.records) {
    line = "record\t";
    append_sparse(line, r.rho);
    line += '\t';
    for (auto f : r.flags) line += f ? '1' : '0';
    line += '\t';
    append_list(line, r.d);
    line += '\t';
    append_sparse(line, r.alpha);
    line += '\t';
    for (auto s : r.state) line += s == VarState::kBasic ? 'B' : 'L';
    for (double v : {r.eps_p, r.eps_d, r.axpy_scale}) {
      line += '\t';
      append_number(line, v, kExact);
    }
    line += '\t';
    append_sparse(line, r.axpy_x);
    line += '\t';
    append_list(line, r.axpy_y);
    line += '\t';
    append_number(line, r.axpy_eps, kExact);
    line += '\n';
    out << line;
  }
  if (!out) throw Error("write_trace: output stream failed");
}

KernelTrace read_trace(std::istream& in) {
  KernelTrace t;
  std::string line;
  std::size_t lineno = 1;
  if (!std::getline(in, line)) throw ParseError(1, "empty trace");
  nlohmann::json header;
  try {
    header = nlohmann::json::parse(line);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(1, std::string("bad header: ") + e.what());
  }
  if (!header.is_object() || !header.contains("format") || !header["format"].is_string()) {
    throw ParseError(1, "header lacks a format field");
  }
  if (header["format"] != kTraceFormat) {
    throw TraceVersionError("unsupported trace format '" + header["format"].get<std::string>() +
                            "', expected '" + kTraceFormat + "'");
  }
  std::size_t expected = 0;
  try {
    t.name = header.value("name", std::string());
    t.a.rows = header.at("rows").get<std::int64_t>();
    t.a.cols = header.at("cols").get<std::int64_t>();
    expected = header.at("records").get<std::size_t>();
    t.seed = header.value("seed", std::uint64_t{0});
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(1, std::string("bad header: ") + e.what());
  }

  ++lineno;
  if (!std::getline(in, line)) throw ParseError(lineno, "missing matrix line");
  {
    FieldReader r(lineno);
    auto f = split(line, '\t');
    if (f.size() != 4 || f[0] != "matrix") r.fail("malformed matrix line");
    t.a.col_ptr = r.integers(f[1]);
    t.a.row_idx = r.integers(f[2]);
    t.a.values = r.doubles(f[3]);
    try {
      t.a.validate();
    } catch (const Error& e) {
      r.fail(e.what());
    }
  }
  t.a_rows = csc_to_csr(t.a);
  const std::int64_t m = t.a.rows;
  const std::int64_t n = t.a.cols;

  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    FieldReader r(lineno);
    auto f = split(line, '\t');
    if (f.size() != 15 || f[0] != "record") r.fail("malformed record");
    KernelRecord k;
    k.rho = make_sparse(m, r.integers(f[1]), r.doubles(f[2]), r);
    if (static_cast<std::int64_t>(f[3].size()) != n) r.fail("flag string has wrong length");
    for (char c : f[3]) {
      if (c != '0' && c != '1') r.fail("bad flag character");
      k.flags.push_back(c == '1');
    }
    k.d = r.doubles(f[4]);
    if (static_cast<std::int64_t>(k.d.size()) != n) r.fail("d has wrong length");
    k.alpha = make_sparse(n, r.integers(f[5]), r.doubles(f[6]), r);
    if (static_cast<std::int64_t>(f[7].size()) != n) r.fail("state string has wrong length");
    for (char c : f[7]) {
      if (c != 'L' && c != 'B') r.fail("bad state character");
      k.state.push_back(c == 'B' ? VarState::kBasic : VarState::kLower);
    }
    k.eps_p = r.number(f[8]);
    k.eps_d = r.number(f[9]);
    k.axpy_scale = r.number(f[10]);
    k.axpy_x = make_sparse(n, r.integers(f[11]), r.doubles(f[12]), r);
    k.axpy_y = r.doubles(f[13]);
    if (static_cast<std::int64_t>(k.axpy_y.size()) != n) r.fail("axpy y has wrong length");
    k.axpy_eps = r.number(f[14]);
    t.records.push_back(std::move(k));
  }
  if (t.records.size() != expected) {
    throw ParseError(lineno, "header announces " + std::to_string(expected) + " records, found " +
                                 std::to_string(t.records.size()));
  }
  return t;
}

const char* kernel_op_name(KernelOp op) {
  switch (op) {
    case KernelOp::kMatvecDense:
      return "matvec_dense";
    case KernelOp::kMatvecSparse:
      return "matvec_sparse";
    case KernelOp::kRatioDense:
      return "ratio_test_dense";
    case KernelOp::kRatioSparse:
      return "ratio_test_sparse";
    case KernelOp::kAxpyDense:
      return "axpy_dense";
    case KernelOp::kAxpySparse:
      return "axpy_sparse";
  }
  return "?";
}

std::uint64_t replay_digest(const KernelTrace& t, KernelOp op) {
  const DenseInputs dense = densify(t);
  Fnv h;
  SparseAccumulator work;
  SparseVector sv;
  std::vector<double> y;
  for (std::size_t k = 0; k < t.records.size(); ++k) {
    const KernelRecord& r = t.records[k];
    switch (op) {
      case KernelOp::kMatvecDense:
        h.add(restricted_transpose_matvec(t.a, dense.rho[k], r.flags));
        break;
      case KernelOp::kMatvecSparse:
        transpose_matvec_sparse(t.a_rows, r.rho, work, sv);
        h.add(sv.indices);
        h.add(sv.values);
        break;
      case KernelOp::kRatioDense:
      case KernelOp::kRatioSparse: {
        RatioTestResult res =
            op == KernelOp::kRatioDense
                ? ratio_test(r.d, dense.alpha[k], r.state, r.eps_p, r.eps_d)
                : ratio_test(r.d, r.alpha, r.state, r.eps_p, r.eps_d);
        h.add(res.result.value_or(-1));
        h.add(res.theta_max);
        h.add(res.candidates);
        break;
      }
      case KernelOp::kAxpyDense:
      case KernelOp::kAxpySparse: {
        y = r.axpy_y;
        auto flagged = op == KernelOp::kAxpyDense
                           ? axpy_checked(r.axpy_scale, dense.axpy_x[k], y, r.axpy_eps)
                           : axpy_checked(r.axpy_scale, r.axpy_x, y, r.axpy_eps);
        h.add(y);
        h.add(flagged);
        break;
      }
    }
  }
  return h.value();
}

double time_kernel(const KernelTrace& t, KernelOp op, int reps) {
  if (reps < 1) throw ConfigError("repetitions must be >= 1");
  if (t.records.empty()) throw ConfigError("trace has no records");
  const DenseInputs dense = densify(t);
  const std::size_t count = t.records.size();
  std::vector<double> y_dense(t.a.cols);
  SparseAccumulator work;
  work.resize(t.a.cols);
  SparseVector sv;
  sv.indices.reserve(t.a.cols);
  sv.values.reserve(t.a.cols);
  std::vector<std::vector<double>> ys;
  double sink = 0.0;
  double best = kInfinity;

  for (int rep = 0; rep < reps; ++rep) {
    if (op == KernelOp::kAxpyDense || op == KernelOp::kAxpySparse) {
      ys.clear();
      for (const auto& r : t.records) ys.push_back(r.axpy_y);
    }
    const auto t0 = std::chrono::steady_clock::now();
    for (std::size_t k = 0; k < count; ++k) {
      const KernelRecord& r = t.records[k];
      switch (op) {
        case KernelOp::kMatvecDense:
          restricted_transpose_matvec(t.a, dense.rho[k], r.flags, y_dense);
          sink += y_dense[k % y_dense.size()];
          break;
        case KernelOp::kMatvecSparse:
          transpose_matvec_sparse(t.a_rows, r.rho, work, sv);
          sink += static_cast<double>(sv.nnz());
          break;
        case KernelOp::kRatioDense:
          sink += ratio_test(r.d, dense.alpha[k], r.state, r.eps_p, r.eps_d).theta_max;
          break;
        case KernelOp::kRatioSparse:
          sink += ratio_test(r.d, r.alpha, r.state, r.eps_p, r.eps_d).theta_max;
          break;
        case KernelOp::kAxpyDense:
          sink += static_cast<double>(
              axpy_checked(r.axpy_scale, dense.axpy_x[k], ys[k], r.axpy_eps).size());
          break;
        case KernelOp::kAxpySparse:
          sink += static_cast<double>(axpy_checked(r.axpy_scale, r.axpy_x, ys[k], r.axpy_eps).size());
          break;
      }
    }
    const auto t1 = std::chrono::steady_clock::now();
    best = std::min(best, std::chrono::duration<double>(t1 - t0).count() / static_cast<double>(count));
  }
  // Keeps the compiler from discarding the kernel calls.
  volatile double keep = sink;
  (void)keep;
  return best;
}

double geometric_mean(const std::vector<double>& values) {
  if (values.empty()) throw ConfigError("geometric mean of an empty list");
  double log_sum = 0.0;
  for (double v : values) {
    if (!(v > 0.0)) throw ConfigError("geometric mean needs positive values");
    log_sum += std::log(v);
  }
  return std::exp(log_sum / static_cast<double>(values.size()));
}

}  // namespace orkit
