// Naive reference implementations used to check the library. None of these
// share code with the implementations under test.
#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "orkit/kernels.hpp"
#include "orkit/model.hpp"
#include "orkit/nlexpr.hpp"
#include "orkit/rng.hpp"
#include "orkit/sparse.hpp"

namespace oracle {

// Row-major dense matrix.
struct Dense {
  std::int64_t rows = 0;
  std::int64_t cols = 0;
  std::vector<double> v;

  Dense(std::int64_t r, std::int64_t c) : rows(r), cols(c), v(r * c, 0.0) {}
  double& operator()(std::int64_t i, std::int64_t j) { return v[i * cols + j]; }
  double operator()(std::int64_t i, std::int64_t j) const { return v[i * cols + j]; }
};

inline Dense from_csc(const orkit::CscMatrix& a) {
  Dense d(a.rows, a.cols);
  for (std::int64_t j = 0; j < a.cols; ++j) {
    for (std::int64_t k = a.col_ptr[j]; k < a.col_ptr[j + 1]; ++k) d(a.row_idx[k], j) += a.values[k];
  }
  return d;
}

inline Dense from_csr(const orkit::CsrMatrix& a) {
  Dense d(a.rows, a.cols);
  for (std::int64_t i = 0; i < a.rows; ++i) {
    for (std::int64_t k = a.row_ptr[i]; k < a.row_ptr[i + 1]; ++k) d(i, a.col_idx[k]) += a.values[k];
  }
  return d;
}

// Dense constraint matrix assembled straight from the model rows.
inline Dense assemble(const orkit::Model& m) {
  Dense d(m.num_constraints(), m.num_variables());
  for (std::int64_t r = 0; r < m.num_constraints(); ++r) {
    const auto& e = m.rows()[r].expr;
    for (std::size_t t = 0; t < e.vars.size(); ++t) d(r, e.vars[t] - 1) += e.coeffs[t];
  }
  return d;
}

inline orkit::CscMatrix random_csc(orkit::SplitMix64& rng, std::int64_t m, std::int64_t n,
                                   double density) {
  orkit::CscMatrix a;
  a.rows = m;
  a.cols = n;
  for (std::int64_t j = 0; j < n; ++j) {
    for (std::int64_t i = 0; i < m; ++i) {
      if (rng.uniform() < density) {
        a.row_idx.push_back(i);
        a.values.push_back(rng.uniform(-2.0, 2.0));
      }
    }
    a.col_ptr.push_back(static_cast<std::int64_t>(a.row_idx.size()));
  }
  return a;
}

// y_i = sum_j A_ji x_j where flags_i, else 0.
inline std::vector<double> restricted_product(const Dense& a, const std::vector<double>& x,
                                              const std::vector<std::uint8_t>& flags) {
  std::vector<double> y(a.cols, 0.0);
  for (std::int64_t i = 0; i < a.cols; ++i) {
    if (!flags[i]) continue;
    for (std::int64_t j = 0; j < a.rows; ++j) y[i] += a(j, i) * x[j];
  }
  return y;
}

inline std::vector<double> transpose_product(const Dense& a, const std::vector<double>& x) {
  std::vector<double> y(a.cols, 0.0);
  for (std::int64_t i = 0; i < a.cols; ++i) {
    for (std::int64_t j = 0; j < a.rows; ++j) y[i] += a(j, i) * x[j];
  }
  return y;
}

// Brute force: collect candidates, compute the bound, then scan for the
// largest pivot among qualifying candidates.
inline std::optional<std::int64_t> harris(const std::vector<double>& d,
                                          const std::vector<double>& alpha,
                                          const std::vector<orkit::VarState>& s, double eps_p,
                                          double eps_d, double* theta = nullptr) {
  double bound = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (s[i] == orkit::VarState::kLower && alpha[i] > eps_p) {
      bound = std::min(bound, (d[i] + eps_d) / alpha[i]);
    }
  }
  if (theta) *theta = bound;
  std::optional<std::int64_t> pick;
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (s[i] != orkit::VarState::kLower || !(alpha[i] > eps_p)) continue;
    if (d[i] / alpha[i] > bound) continue;
    if (!pick || alpha[i] > alpha[*pick]) pick = static_cast<std::int64_t>(i);
  }
  return pick;
}

// Textbook min-ratio rule: argmin over alpha_i > 0 of d_i / alpha_i.
inline std::optional<std::int64_t> min_ratio(const std::vector<double>& d,
                                             const std::vector<double>& alpha) {
  std::optional<std::int64_t> pick;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (alpha[i] > 0.0 && d[i] / alpha[i] < best) {
      best = d[i] / alpha[i];
      pick = static_cast<std::int64_t>(i);
    }
  }
  return pick;
}

// Central finite-difference Jacobian of g at x, dense row-major.
inline Dense fd_jacobian(const orkit::NonlinearModel& m, std::vector<double> x, double h) {
  Dense j(m.num_constraints(), m.num_variables());
  for (std::int64_t c = 0; c < m.num_variables(); ++c) {
    const double keep = x[c];
    x[c] = keep + h;
    const auto up = orkit::evaluate_constraints(m, x);
    x[c] = keep - h;
    const auto down = orkit::evaluate_constraints(m, x);
    x[c] = keep;
    for (std::int64_t r = 0; r < m.num_constraints(); ++r) j(r, c) = (up[r] - down[r]) / (2.0 * h);
  }
  return j;
}

// Uniform point inside finite bounds; free coordinates on [-1, 1].
inline std::vector<double> random_point(orkit::SplitMix64& rng, const std::vector<double>& lo,
                                        const std::vector<double>& hi) {
  std::vector<double> x(lo.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double a = std::isfinite(lo[i]) ? lo[i] : -1.0;
    const double b = std::isfinite(hi[i]) ? hi[i] : 1.0;
    x[i] = rng.uniform(a, b);
  }
  return x;
}

}  // namespace oracle
