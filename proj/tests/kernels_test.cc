#include "orkit/kernels.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "oracles.hpp"
#include "orkit/errors.hpp"
#include "orkit/model.hpp"

namespace orkit {
namespace {

// Columns (1,0), (0,1), (1,1).
CscMatrix small_matrix() {
  CscMatrix a;
  a.rows = 2;
  a.cols = 3;
  a.col_ptr = {0, 1, 2, 4};
  a.row_idx = {0, 1, 0, 1};
  a.values = {1, 1, 1, 1};
  return a;
}

CscMatrix identity(std::int64_t n) {
  CscMatrix a;
  a.rows = a.cols = n;
  for (std::int64_t j = 0; j < n; ++j) {
    a.row_idx.push_back(j);
    a.values.push_back(1.0);
    a.col_ptr.push_back(j + 1);
  }
  return a;
}

std::vector<VarState> all_lower(std::size_t n) { return std::vector<VarState>(n, VarState::kLower); }

TEST(RestrictedMatvecTest, Examples) {
  const CscMatrix a = small_matrix();
  const std::vector<double> x = {1, 2};
  EXPECT_EQ(restricted_transpose_matvec(a, x, std::vector<std::uint8_t>{1, 0, 1}),
            (std::vector<double>{1, 0, 3}));
  EXPECT_EQ(restricted_transpose_matvec(a, x, std::vector<std::uint8_t>{0, 0, 0}),
            (std::vector<double>{0, 0, 0}));
  const std::vector<double> v = {4, -1, 2.5};
  EXPECT_EQ(restricted_transpose_matvec(identity(3), v, std::vector<std::uint8_t>{1, 1, 1}), v);
}

TEST(RestrictedMatvecTest, ZeroFillsUnflagged) {
  const CscMatrix a = small_matrix();
  std::vector<double> y = {9, 9, 9};
  restricted_transpose_matvec(a, std::vector<double>{1, 2}, std::vector<std::uint8_t>{0, 1, 0}, y);
  EXPECT_EQ(y, (std::vector<double>{0, 2, 0}));
}

TEST(RestrictedMatvecTest, DimensionMismatch) {
  const CscMatrix a = small_matrix();
  EXPECT_THROW(restricted_transpose_matvec(a, std::vector<double>{1}, std::vector<std::uint8_t>{1, 1, 1}),
               DimensionMismatch);
  EXPECT_THROW(restricted_transpose_matvec(a, std::vector<double>{1, 2}, std::vector<std::uint8_t>{1}),
               DimensionMismatch);
}

TEST(SparseMatvecTest, Examples) {
  const CsrMatrix a = csc_to_csr(small_matrix());
  SparseVector x{2, {0}, {1.0}};
  SparseVector y = transpose_matvec_sparse(a, x);
  EXPECT_EQ(y.size, 3);
  EXPECT_EQ(y.indices, (std::vector<std::int64_t>{0, 2}));
  EXPECT_EQ(y.values, (std::vector<double>{1, 1}));

  EXPECT_EQ(transpose_matvec_sparse(a, SparseVector{2, {}, {}}).nnz(), 0);

  SparseVector both{2, {0, 1}, {1.0, 1.0}};
  SparseVector z = transpose_matvec_sparse(a, both);
  // First-touch order: row 0 touches 0 and 2, row 1 then touches 1.
  EXPECT_EQ(z.indices, (std::vector<std::int64_t>{0, 2, 1}));
  EXPECT_EQ(z.values, (std::vector<double>{1, 2, 1}));
  z.sort_indices();
  EXPECT_EQ(z.to_dense(), (std::vector<double>{1, 1, 2}));
}

TEST(SparseMatvecTest, WorkspaceIsClean) {
  const CsrMatrix a = csc_to_csr(small_matrix());
  SparseAccumulator work;
  SparseVector y;
  transpose_matvec_sparse(a, SparseVector{2, {0, 1}, {3.0, 5.0}}, work, y);
  transpose_matvec_sparse(a, SparseVector{2, {1}, {1.0}}, work, y);
  EXPECT_EQ(y.indices, (std::vector<std::int64_t>{1, 2}));
  EXPECT_EQ(y.values, (std::vector<double>{1, 1}));
  EXPECT_THROW(transpose_matvec_sparse(a, SparseVector{3, {}, {}}), DimensionMismatch);
}

TEST(RatioTestTest, HarrisPrefersLargePivot) {
  const std::vector<double> d = {0.0, 1e-8};
  const std::vector<double> alpha = {1e-6, 1.0};
  const auto r = ratio_test(d, alpha, all_lower(2), 1e-9, 1e-7);
  ASSERT_TRUE(r.result.has_value());
  EXPECT_EQ(*r.result, 1);
  EXPECT_NEAR(r.theta_max, 1.1e-7, 1e-20);
  EXPECT_EQ(oracle::min_ratio(d, alpha), 0);
  EXPECT_EQ(oracle::harris(d, alpha, all_lower(2), 1e-9, 1e-7), 1);
}

TEST(RatioTestTest, SecondRatioExceedsBound) {
  const auto r = ratio_test(std::vector<double>{1, 2}, std::vector<double>{0.5, 2}, all_lower(2), 1e-7, 1e-7);
  ASSERT_TRUE(r.result.has_value());
  EXPECT_EQ(*r.result, 1);
  EXPECT_NEAR(r.theta_max, 1.00000005, 1e-12);
}

TEST(RatioTestTest, NoCandidates) {
  const std::vector<double> d = {1, 1, 1};
  const auto r = ratio_test(d, std::vector<double>{1e-10, -1, 0}, all_lower(3), 1e-9, 1e-7);
  EXPECT_FALSE(r.result.has_value());
  EXPECT_TRUE(std::isinf(r.theta_max));
  EXPECT_GT(r.theta_max, 0);
  EXPECT_TRUE(r.candidates.empty());
  // Basic columns are skipped even with a large pivot.
  const auto b = ratio_test(d, std::vector<double>{5, 5, 5},
                            std::vector<VarState>(3, VarState::kBasic), 1e-9, 1e-7);
  EXPECT_FALSE(b.result.has_value());
}

TEST(RatioTestTest, TiesGoToFirstCandidate) {
  const std::vector<double> d = {0, 0, 0};
  const std::vector<double> alpha = {1, 2, 2};
  EXPECT_EQ(*ratio_test(d, alpha, all_lower(3), 1e-9, 1e-7).result, 1);
  SparseVector s{3, {2, 1}, {2, 2}};
  EXPECT_EQ(*ratio_test(d, s, all_lower(3), 1e-9, 1e-7).result, 2);
}

TEST(RatioTestTest, RejectsBadTolerances) {
  const std::vector<double> d = {0};
  const std::vector<double> a = {1};
  EXPECT_THROW(ratio_test(d, a, all_lower(1), 0.0, 1e-7), ConfigError);
  EXPECT_THROW(ratio_test(d, a, all_lower(1), 1e-9, -1.0), ConfigError);
  EXPECT_THROW(ratio_test(d, std::vector<double>{1, 2}, all_lower(1), 1e-9, 1e-7), DimensionMismatch);
}

TEST(AxpyTest, Examples) {
  std::vector<double> y = {1, 1};
  EXPECT_EQ(axpy_checked(1.0, std::vector<double>{-2, 0.5}, y, 1e-6), (std::vector<std::int64_t>{0}));
  EXPECT_EQ(y, (std::vector<double>{-1, 1.5}));

  std::vector<double> z = {-1, 2, -3};
  EXPECT_EQ(axpy_checked(0.0, std::vector<double>{1, 1, 1}, z, 1e-6), (std::vector<std::int64_t>{0, 2}));
  EXPECT_EQ(z, (std::vector<double>{-1, 2, -3}));

  EXPECT_TRUE(axpy_checked(2.0, SparseVector{3, {}, {}}, z, 1e-6).empty());
  EXPECT_EQ(z, (std::vector<double>{-1, 2, -3}));
}

TEST(AxpyTest, SparseChecksOnlyStoredEntries) {
  std::vector<double> y = {-5, 1, 1};
  EXPECT_EQ(axpy_checked(1.0, SparseVector{3, {2, 1}, {-2, -4}}, y, 1e-6),
            (std::vector<std::int64_t>{2, 1}));
  EXPECT_EQ(y, (std::vector<double>{-5, -3, -1}));
  EXPECT_THROW(axpy_checked(1.0, SparseVector{2, {}, {}}, y, 1e-6), DimensionMismatch);
}

TEST(ConversionTest, IdentityRoundTripsBitwise) {
  const CscMatrix a = identity(3);
  EXPECT_EQ(csr_to_csc(csc_to_csr(a)), a);
}

TEST(ConversionTest, EmptyMatrix) {
  CscMatrix a;
  EXPECT_EQ(csr_to_csc(csc_to_csr(a)), a);
  EXPECT_EQ(csc_to_csr(a).nnz(), 0);
}

TEST(ConversionTest, RandomMatchesDense) {
  SplitMix64 rng(20);
  const CscMatrix a = oracle::random_csc(rng, 20, 30, 0.2);
  const CsrMatrix r = csc_to_csr(a);
  ASSERT_NO_THROW(r.validate());
  EXPECT_EQ(oracle::from_csr(r).v, oracle::from_csc(a).v);
  EXPECT_EQ(csr_to_csc(r), a);
}

struct RandomCase {
  CscMatrix a;
  std::vector<double> x;
  std::vector<std::uint8_t> flags;
  std::vector<double> d;
  std::vector<double> alpha;
  std::vector<VarState> s;
};

RandomCase make_case(SplitMix64& rng) {
  RandomCase c;
  const auto m = 1 + static_cast<std::int64_t>(rng.below(50));
  const auto n = 1 + static_cast<std::int64_t>(rng.below(50));
  c.a = oracle::random_csc(rng, m, n, rng.uniform(0.0, 0.5));
  c.x.resize(m);
  for (auto& v : c.x) v = rng.uniform() < 0.4 ? 0.0 : rng.uniform(-3, 3);
  c.flags.resize(n);
  c.d.resize(n);
  c.alpha.resize(n);
  c.s.resize(n);
  for (std::int64_t i = 0; i < n; ++i) {
    c.flags[i] = rng.uniform() < 0.6;
    c.d[i] = rng.uniform() < 0.2 ? 0.0 : rng.uniform(0.0, 1.0);
    c.alpha[i] = rng.uniform() < 0.3 ? 0.0 : rng.uniform(-1.0, 1.0);
    c.s[i] = rng.uniform() < 0.7 ? VarState::kLower : VarState::kBasic;
  }
  return c;
}

TEST(KernelPropertyTest, RestrictedMatvecMatchesOracle) {
  SplitMix64 rng(1);
  for (int t = 0; t < 1000; ++t) {
    const RandomCase c = make_case(rng);
    const auto want = oracle::restricted_product(oracle::from_csc(c.a), c.x, c.flags);
    const auto got = restricted_transpose_matvec(c.a, c.x, c.flags);
    ASSERT_EQ(got.size(), want.size());
    for (std::size_t i = 0; i < got.size(); ++i) ASSERT_NEAR(got[i], want[i], 1e-12);
  }
}

TEST(KernelPropertyTest, SparseMatvecMatchesOracle) {
  SplitMix64 rng(2);
  for (int t = 0; t < 1000; ++t) {
    const RandomCase c = make_case(rng);
    const oracle::Dense dense = oracle::from_csc(c.a);
    const auto want = oracle::transpose_product(dense, c.x);
    SparseVector y = transpose_matvec_sparse(csc_to_csr(c.a), sparse_from_dense(c.x));
    ASSERT_NO_THROW(y.validate());
    // Structural pattern: columns with an entry in a row where x is nonzero.
    std::vector<std::uint8_t> reach(c.a.cols, 0);
    for (std::int64_t j = 0; j < dense.rows; ++j) {
      if (c.x[j] == 0.0) continue;
      for (std::int64_t i = 0; i < dense.cols; ++i) {
        if (dense(j, i) != 0.0) reach[i] = 1;
      }
    }
    std::vector<std::uint8_t> seen(c.a.cols, 0);
    for (std::int64_t i : y.indices) seen[i] = 1;
    ASSERT_EQ(seen, reach);
    const auto got = y.to_dense();
    for (std::size_t i = 0; i < got.size(); ++i) ASSERT_NEAR(got[i], want[i], 1e-12);
  }
}

TEST(KernelPropertyTest, RatioTestMatchesOracleAndDominance) {
  SplitMix64 rng(3);
  const double eps_p = 1e-9;
  const double eps_d = 1e-7;
  for (int t = 0; t < 1000; ++t) {
    const RandomCase c = make_case(rng);
    double theta = 0.0;
    const auto want = oracle::harris(c.d, c.alpha, c.s, eps_p, eps_d, &theta);
    const auto dense = ratio_test(c.d, c.alpha, c.s, eps_p, eps_d);
    const auto sparse = ratio_test(c.d, sparse_from_dense(c.alpha), c.s, eps_p, eps_d);
    ASSERT_EQ(dense.result, want);
    ASSERT_EQ(sparse.result, want);
    ASSERT_EQ(dense.theta_max, theta);
    ASSERT_EQ(sparse.theta_max, theta);
    if (!dense.result) continue;
    const std::int64_t i = *dense.result;
    ASSERT_NE(std::find(dense.candidates.begin(), dense.candidates.end(), i), dense.candidates.end());
    for (std::int64_t j : dense.candidates) {
      ASSERT_LE(c.d[i] / c.alpha[i], (c.d[j] + eps_d) / c.alpha[j]);
    }
  }
}

TEST(KernelPropertyTest, AxpyMatchesOracle) {
  SplitMix64 rng(4);
  const double eps = 1e-6;
  for (int t = 0; t < 1000; ++t) {
    const RandomCase c = make_case(rng);
    const double a = rng.uniform(-2, 2);
    std::vector<double> y0(c.d.size());
    for (auto& v : y0) v = rng.uniform(-1, 1);

    std::vector<double> want = y0;
    std::vector<std::int64_t> want_flags, want_sparse_flags;
    for (std::size_t j = 0; j < want.size(); ++j) {
      want[j] = y0[j] + a * c.alpha[j];
      if (want[j] < -eps) {
        want_flags.push_back(static_cast<std::int64_t>(j));
        if (c.alpha[j] != 0.0) want_sparse_flags.push_back(static_cast<std::int64_t>(j));
      }
    }
    std::vector<double> yd = y0;
    ASSERT_EQ(axpy_checked(a, c.alpha, yd, eps), want_flags);
    std::vector<double> ys = y0;
    ASSERT_EQ(axpy_checked(a, sparse_from_dense(c.alpha), ys, eps), want_sparse_flags);
    for (std::size_t j = 0; j < want.size(); ++j) {
      ASSERT_NEAR(yd[j], want[j], 1e-12);
      ASSERT_EQ(ys[j], yd[j]);
    }
  }
}

}  // namespace
}  // namespace orkit
