#include "orkit/kernels.hpp"

#include <string>

#include "orkit/errors.hpp"
#include "orkit/model.hpp"

namespace orkit {
namespace {

void check_size(std::int64_t got, std::int64_t want, const char* what) {
  if (got != want) {
    throw DimensionMismatch(std::string(what) + ": expected length " + std::to_string(want) +
                            ", got " + std::to_string(got));
  }
}

void check_tolerances(double eps_p, double eps_d) {
  if (!(eps_p > 0.0) || !(eps_d > 0.0)) throw ConfigError("ratio_test: tolerances must be positive");
}

std::int64_t len(auto const& s) { return static_cast<std::int64_t>(s.size()); }

}  // namespace

void restricted_transpose_matvec(const CscMatrix& a, std::span<const double> x,
                                 std::span<const std::uint8_t> flags, std::span<double> y) {
  check_size(len(x), a.rows, "restricted_transpose_matvec x");
  check_size(len(flags), a.cols, "restricted_transpose_matvec flags");
  check_size(len(y), a.cols, "restricted_transpose_matvec y");
  const std::int64_t* ptr = a.col_ptr.data();
  const std::int64_t* row = a.row_idx.data();
  const double* val = a.values.data();
  for (std::int64_t i = 0; i < a.cols; ++i) {
    if (!flags[i]) {
      y[i] = 0.0;
      continue;
    }
    double sum = 0.0;
    for (std::int64_t k = ptr[i]; k < ptr[i + 1]; ++k) sum += val[k] * x[row[k]];
    y[i] = sum;
  }
}

std::vector<double> restricted_transpose_matvec(const CscMatrix& a, std::span<const double> x,
                                                std::span<const std::uint8_t> flags) {
  std::vector<double> y(a.cols);
  restricted_transpose_matvec(a, x, flags, y);
  return y;
}

void SparseAccumulator::resize(std::int64_t n) {
  if (len(values) != n) {
    values.assign(n, 0.0);
    touched.assign(n, 0);
  }
  order.reserve(n);
}

void transpose_matvec_sparse(const CsrMatrix& a, const SparseVector& x, SparseAccumulator& work,
                             SparseVector& y) {
  check_size(x.size, a.rows, "transpose_matvec_sparse x");
  work.resize(a.cols);
  work.order.clear();
  const std::int64_t* ptr = a.row_ptr.data();
  const std::int64_t* col = a.col_idx.data();
  const double* val = a.values.data();
  for (std::int64_t t = 0; t < x.nnz(); ++t) {
    const std::int64_t r = x.indices[t];
    const double xr = x.values[t];
    for (std::int64_t k = ptr[r]; k < ptr[r + 1]; ++k) {
      const std::int64_t c = col[k];
      if (!work.touched[c]) {
        work.touched[c] = 1;
        work.order.push_back(c);
      }
      work.values[c] += xr * val[k];
    }
  }
  y.size = a.cols;
  y.indices.clear();
  y.values.clear();
  for (std::int64_t c : work.order) {
    y.indices.push_back(c);
    y.values.push_back(work.values[c]);
    work.values[c] = 0.0;
    work.touched[c] = 0;
  }
}

SparseVector transpose_matvec_sparse(const CsrMatrix& a, const SparseVector& x) {
  SparseAccumulator work;
  SparseVector y;
  transpose_matvec_sparse(a, x, work, y);
  return y;
}

RatioTestResult ratio_test(std::span<const double> d, std::span<const double> alpha,
                           std::span<const VarState> state, double eps_p, double eps_d) {
  check_tolerances(eps_p, eps_d);
  check_size(len(alpha), len(d), "ratio_test alpha");
  check_size(len(state), len(d), "ratio_test state");
  RatioTestResult out;
  out.theta_max = kInfinity;
  for (std::int64_t i = 0; i < len(d); ++i) {
    if (state[i] == VarState::kLower && alpha[i] > eps_p) {
      out.candidates.push_back(i);
      const double bound = (d[i] + eps_d) / alpha[i];
      if (bound < out.theta_max) out.theta_max = bound;
    }
  }
  double best = 0.0;
  for (std::int64_t i : out.candidates) {
    if (d[i] / alpha[i] <= out.theta_max && alpha[i] > best) {
      best = alpha[i];
      out.result = i;
    }
  }
  return out;
}

RatioTestResult ratio_test(std::span<const double> d, const SparseVector& alpha,
                           std::span<const VarState> state, double eps_p, double eps_d) {
  check_tolerances(eps_p, eps_d);
  check_size(alpha.size, len(d), "ratio_test alpha");
  check_size(len(state), len(d), "ratio_test state");
  RatioTestResult out;
  out.theta_max = kInfinity;
  // Candidates keep their position in alpha's storage so pass 2 reads the
  // value directly.
  std::vector<std::int64_t> slots;
  for (std::int64_t t = 0; t < alpha.nnz(); ++t) {
    const std::int64_t i = alpha.indices[t];
    const double ai = alpha.values[t];
    if (state[i] == VarState::kLower && ai > eps_p) {
      out.candidates.push_back(i);
      slots.push_back(t);
      const double bound = (d[i] + eps_d) / ai;
      if (bound < out.theta_max) out.theta_max = bound;
    }
  }
  double best = 0.0;
  for (std::int64_t t : slots) {
    const std::int64_t i = alpha.indices[t];
    const double ai = alpha.values[t];
    if (d[i] / ai <= out.theta_max && ai > best) {
      best = ai;
      out.result = i;
    }
  }
  return out;
}

std::vector<std::int64_t> axpy_checked(double a, std::span<const double> x, std::span<double> y,
                                       double eps) {
  check_size(len(y), len(x), "axpy_checked y");
  std::vector<std::int64_t> flagged;
  for (std::int64_t j = 0; j < len(x); ++j) {
    y[j] += a * x[j];
    if (y[j] < -eps) flagged.push_back(j);
  }
  return flagged;
}

std::vector<std::int64_t> axpy_checked(double a, const SparseVector& x, std::span<double> y,
                                       double eps) {
  check_size(len(y), x.size, "axpy_checked y");
  std::vector<std::int64_t> flagged;
  for (std::int64_t t = 0; t < x.nnz(); ++t) {
    const std::int64_t j = x.indices[t];
    y[j] += a * x.values[t];
    if (y[j] < -eps) flagged.push_back(j);
  }
  return flagged;
}

}  // namespace orkit
