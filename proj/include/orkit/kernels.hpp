#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "orkit/sparse.hpp"

namespace orkit {

// Status of a column in the dual ratio test. Upper-bounded states are not
// modeled.
enum class VarState : std::uint8_t { kLower, kBasic };

// y = A^T x restricted to columns with flags[i] != 0; other entries are 0.
// The output always has A.cols entries.
void restricted_transpose_matvec(const CscMatrix& a, std::span<const double> x,
                                 std::span<const std::uint8_t> flags, std::span<double> y);
std::vector<double> restricted_transpose_matvec(const CscMatrix& a, std::span<const double> x,
                                                std::span<const std::uint8_t> flags);

// Reusable dense accumulator for transpose_matvec_sparse. Keeps the
// allocation across calls so the timed path does not touch the heap.
class SparseAccumulator {
 public:
  void resize(std::int64_t n);

  std::vector<double> values;
  std::vector<std::uint8_t> touched;
  std::vector<std::int64_t> order;
};

// y = A^T x as a linear combination of the rows of A selected by the stored
// entries of x. Output indices appear in first-touch order.
void transpose_matvec_sparse(const CsrMatrix& a, const SparseVector& x, SparseAccumulator& work,
                             SparseVector& y);
SparseVector transpose_matvec_sparse(const CsrMatrix& a, const SparseVector& x);

struct RatioTestResult {
  std::optional<std::int64_t> result;  // empty when no candidate exists
  double theta_max = 0.0;
  std::vector<std::int64_t> candidates;
};

// Two-pass stabilized minimum ratio test. Pass 1 bounds the step by
// (d_i + eps_d) / alpha_i over candidates (state lower, alpha_i > eps_p);
// pass 2 picks the largest alpha_i among candidates whose ratio does not
// exceed that bound. Ties go to the first candidate scanned. Throws
// ConfigError for nonpositive tolerances.
RatioTestResult ratio_test(std::span<const double> d, std::span<const double> alpha,
                           std::span<const VarState> state, double eps_p, double eps_d);
RatioTestResult ratio_test(std::span<const double> d, const SparseVector& alpha,
                           std::span<const VarState> state, double eps_p, double eps_d);

// y += a * x, reporting indices of updated components that end below -eps,
// in update order. The dense form updates (and checks) every component.
std::vector<std::int64_t> axpy_checked(double a, std::span<const double> x, std::span<double> y,
                                       double eps);
std::vector<std::int64_t> axpy_checked(double a, const SparseVector& x, std::span<double> y,
                                       double eps);

}  // namespace orkit
