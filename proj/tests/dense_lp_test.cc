#include "orkit/dense_lp.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <optional>

#include "orkit/rng.hpp"

namespace orkit {
namespace {

// Enumerates every vertex of a 2-variable LP with a finite box: intersections
// of pairs of lines drawn from the rows and the bounds.
std::optional<double> brute_force_2d(const DenseLp& lp) {
  struct Line {
    double a, b, r;
  };
  std::vector<Line> lines;
  for (std::size_t i = 0; i < lp.rows.size(); ++i) lines.push_back({lp.rows[i][0], lp.rows[i][1], lp.b[i]});
  lines.push_back({1, 0, lp.lower[0]});
  lines.push_back({1, 0, lp.upper[0]});
  lines.push_back({0, 1, lp.lower[1]});
  lines.push_back({0, 1, lp.upper[1]});
  auto feasible = [&](double x, double y) {
    const double tol = 1e-9;
    if (x < lp.lower[0] - tol || x > lp.upper[0] + tol) return false;
    if (y < lp.lower[1] - tol || y > lp.upper[1] + tol) return false;
    for (std::size_t i = 0; i < lp.rows.size(); ++i) {
      const double v = lp.rows[i][0] * x + lp.rows[i][1] * y;
      if (lp.senses[i] == RowSense::kLessEqual && v > lp.b[i] + tol) return false;
      if (lp.senses[i] == RowSense::kGreaterEqual && v < lp.b[i] - tol) return false;
      if (lp.senses[i] == RowSense::kEqual && std::fabs(v - lp.b[i]) > tol) return false;
    }
    return true;
  };
  std::optional<double> best;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    for (std::size_t j = i + 1; j < lines.size(); ++j) {
      const double det = lines[i].a * lines[j].b - lines[i].b * lines[j].a;
      if (std::fabs(det) < 1e-12) continue;
      const double x = (lines[i].r * lines[j].b - lines[i].b * lines[j].r) / det;
      const double y = (lines[i].a * lines[j].r - lines[i].r * lines[j].a) / det;
      if (!feasible(x, y)) continue;
      const double v = lp.c[0] * x + lp.c[1] * y;
      if (!best || v < *best) best = v;
    }
  }
  return best;
}

TEST(DenseLpTest, SimpleMaximum) {
  // max x + y  s.t. x + 2y <= 4, 3x + y <= 6, x, y >= 0 -> (1.6, 1.2)
  DenseLp lp;
  lp.add_variable(-1, 0, kInfinity);
  lp.add_variable(-1, 0, kInfinity);
  lp.add_row({1, 2}, RowSense::kLessEqual, 4);
  lp.add_row({3, 1}, RowSense::kLessEqual, 6);
  const auto s = solve_dense_lp(lp);
  ASSERT_EQ(s.status, LpStatus::kOptimal);
  EXPECT_NEAR(s.x[0], 1.6, 1e-12);
  EXPECT_NEAR(s.x[1], 1.2, 1e-12);
  EXPECT_NEAR(s.objective, -2.8, 1e-12);
}

TEST(DenseLpTest, FreeAndNegativeVariables) {
  // min x - y  s.t. x >= -3, y <= 2 (upper only), x + y = 0
  DenseLp lp;
  lp.add_variable(1, -kInfinity, kInfinity);
  lp.add_variable(-1, -kInfinity, 2);
  lp.add_row({1, 0}, RowSense::kGreaterEqual, -3);
  lp.add_row({1, 1}, RowSense::kEqual, 0);
  const auto s = solve_dense_lp(lp);
  ASSERT_EQ(s.status, LpStatus::kOptimal);
  EXPECT_NEAR(s.x[0], -2, 1e-12);
  EXPECT_NEAR(s.x[1], 2, 1e-12);
  EXPECT_NEAR(s.objective, -4, 1e-12);
}

TEST(DenseLpTest, Infeasible) {
  DenseLp lp;
  lp.add_variable(1, 0, 1);
  lp.add_row({1}, RowSense::kGreaterEqual, 2);
  EXPECT_EQ(solve_dense_lp(lp).status, LpStatus::kInfeasible);
}

TEST(DenseLpTest, Unbounded) {
  DenseLp lp;
  lp.add_variable(-1, 0, kInfinity);
  lp.add_variable(0, 0, kInfinity);
  lp.add_row({1, -1}, RowSense::kLessEqual, 1);
  EXPECT_EQ(solve_dense_lp(lp).status, LpStatus::kUnbounded);
}

TEST(DenseLpTest, FixedVariableAndNoRows) {
  DenseLp lp;
  lp.add_variable(3, 2, 2);
  lp.add_variable(-1, -1, 5);
  const auto s = solve_dense_lp(lp);
  ASSERT_EQ(s.status, LpStatus::kOptimal);
  EXPECT_NEAR(s.x[0], 2, 1e-12);
  EXPECT_NEAR(s.x[1], 5, 1e-12);
  EXPECT_NEAR(s.objective, 1, 1e-12);
}

TEST(DenseLpTest, DegenerateRowsDoNotCycle) {
  DenseLp lp;
  for (int j = 0; j < 4; ++j) lp.add_variable(j % 2 ? -1.0 : -0.5, 0, kInfinity);
  for (int i = 0; i < 6; ++i) lp.add_row({1, 1, 1, 1}, RowSense::kLessEqual, 0);
  lp.add_row({1, 0, 0, 0}, RowSense::kEqual, 0);
  const auto s = solve_dense_lp(lp);
  ASSERT_EQ(s.status, LpStatus::kOptimal);
  EXPECT_NEAR(s.objective, 0.0, 1e-12);
}

TEST(DenseLpTest, RandomTwoVariableProblemsMatchVertexEnumeration) {
  SplitMix64 rng(44);
  int solved = 0;
  for (int trial = 0; trial < 300; ++trial) {
    DenseLp lp;
    for (int j = 0; j < 2; ++j) {
      const double lo = rng.uniform(-5, 0);
      lp.add_variable(rng.uniform(-2, 2), lo, lo + rng.uniform(0.5, 8));
    }
    const int rows = static_cast<int>(rng.below(5));
    for (int i = 0; i < rows; ++i) {
      lp.add_row({rng.uniform(-2, 2), rng.uniform(-2, 2)}, static_cast<RowSense>(rng.below(2) * 2),
                 rng.uniform(-3, 3));
    }
    const auto want = brute_force_2d(lp);
    const auto got = solve_dense_lp(lp);
    if (!want) {
      EXPECT_EQ(got.status, LpStatus::kInfeasible) << "trial " << trial;
      continue;
    }
    ASSERT_EQ(got.status, LpStatus::kOptimal) << "trial " << trial;
    EXPECT_NEAR(got.objective, *want, 1e-8) << "trial " << trial;
    ++solved;
  }
  EXPECT_GT(solved, 100);
}

}  // namespace
}  // namespace orkit
