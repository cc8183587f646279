#include "orkit/instances.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <set>

#include "orkit/errors.hpp"
#include "orkit/format.hpp"

namespace orkit {
namespace {

std::int64_t jacobian_entries(const NonlinearModel& m) {
  std::int64_t total = 0;
  for (const auto& row : m.constraints()) total += canonical_key(row.root).slot_columns.size();
  return static_cast<std::int64_t>(total);
}

TEST(PMedianTest, CountsMatchFormula) {
  const PMedianConfig cfg{1000, 100, 100, kDefaultSeed};
  Model m = gen_pmedian(cfg);
  EXPECT_EQ(m.num_variables(), 101000);
  EXPECT_EQ(m.num_constraints(), 100101);
  const auto dims = pmedian_dimensions(cfg);
  EXPECT_EQ(dims.variables, 101000);
  EXPECT_EQ(dims.constraints, 100101);
  EXPECT_EQ(to_column_form(m).a.nnz(), dims.nonzeros);
}

TEST(PMedianTest, SmallestInstance) {
  const PMedianConfig cfg{1, 1, 1, 3};
  Model m = gen_pmedian(cfg);
  EXPECT_EQ(m.num_variables(), 2);
  EXPECT_EQ(m.num_constraints(), 3);
  const double c1 = pmedian_customer_locations(cfg)[0];
  EXPECT_EQ(c1, 1.0);  // uniform on [1, 1]
  ASSERT_EQ(m.objective().vars.size(), 1u);
  EXPECT_EQ(m.objective().coeffs[0], std::fabs(c1 - 1.0));
}

TEST(PMedianTest, StructureOfRows) {
  const PMedianConfig cfg{3, 2, 2, 17};
  Model m = gen_pmedian(cfg);
  // x_ij <= y_j for i = 1..2, j = 1..3; x columns 1..6, y columns 7..9.
  for (std::int64_t i = 0; i < 2; ++i) {
    for (std::int64_t j = 0; j < 3; ++j) {
      const auto& e = m.row(1 + i * 3 + j).expr;
      EXPECT_EQ(e.vars, (std::vector<std::int64_t>{1 + i * 3 + j, 7 + j}));
      EXPECT_EQ(e.coeffs, (std::vector<double>{1, -1}));
      EXPECT_EQ(m.row(1 + i * 3 + j).sense, RowSense::kLessEqual);
    }
  }
  for (std::int64_t i = 0; i < 2; ++i) {
    const auto& r = m.row(7 + i);
    EXPECT_EQ(r.expr.vars.size(), 3u);
    EXPECT_EQ(r.expr.constant, -1.0);
    EXPECT_EQ(r.sense, RowSense::kEqual);
  }
  EXPECT_EQ(m.row(9).expr.vars, (std::vector<std::int64_t>{7, 8, 9}));
  EXPECT_EQ(m.row(9).expr.constant, -2.0);
  const auto loc = pmedian_customer_locations(cfg);
  for (std::size_t k = 0; k < m.objective().size(); ++k) {
    const std::int64_t col = m.objective().vars[k] - 1;
    EXPECT_EQ(m.objective().coeffs[k], std::fabs(loc[col / 3] - static_cast<double>(col % 3 + 1)));
  }
  for (double c : loc) {
    EXPECT_GE(c, 1.0);
    EXPECT_LE(c, 3.0);
  }
}

TEST(PMedianTest, SeedControlsOutput) {
  EXPECT_EQ(write_lp_string(gen_pmedian({20, 2, 5, 1})), write_lp_string(gen_pmedian({20, 2, 5, 1})));
  EXPECT_NE(write_lp_string(gen_pmedian({20, 2, 5, 1})), write_lp_string(gen_pmedian({20, 2, 5, 2})));
}

TEST(PMedianTest, InvalidConfig) {
  EXPECT_THROW(gen_pmedian({5, 6, 1, 0}), ConfigError);
  EXPECT_THROW(gen_pmedian({5, 0, 1, 0}), ConfigError);
  EXPECT_THROW(gen_pmedian({5, 1, 0, 0}), ConfigError);
}

TEST(Cont52Test, SmallGridCounts) {
  Model m = gen_cont5_2({2, 2});
  EXPECT_EQ(m.num_constraints(), 6);
  EXPECT_EQ(m.num_variables(), 3 * 3 + 2);
  for (const auto& r : m.rows()) EXPECT_EQ(r.sense, RowSense::kEqual);
  EXPECT_TRUE(m.objective().empty());
}

TEST(Cont52Test, Bounds) {
  const Cont52Config cfg{4, 3};
  Model m = gen_cont5_2(cfg);
  const std::int64_t ny = (cfg.time_steps + 1) * (cfg.space_steps + 1);
  for (std::int64_t c = 1; c <= cfg.space_steps + 1; ++c) {
    EXPECT_EQ(m.lower_bound(c), 0.0);
    EXPECT_EQ(m.upper_bound(c), 0.0);
  }
  for (std::int64_t c = cfg.space_steps + 2; c <= ny; ++c) {
    EXPECT_EQ(m.lower_bound(c), 0.0);
    EXPECT_EQ(m.upper_bound(c), 1.0);
  }
  for (std::int64_t c = ny + 1; c <= m.num_variables(); ++c) {
    EXPECT_EQ(m.lower_bound(c), -1.0);
    EXPECT_EQ(m.upper_bound(c), 1.0);
  }
}

TEST(Cont52Test, PdeRowCoefficients) {
  const Cont52Config cfg{4, 4};
  Model m = gen_cont5_2(cfg);
  const double dt = 0.25;
  const double k = 1.0 / (2.0 * 0.25 * 0.25);
  const auto& e = m.row(1).expr;  // i = 0, j = 1
  ASSERT_EQ(e.size(), 8u);
  EXPECT_DOUBLE_EQ(e.coeffs[0], 1.0 / dt);
  EXPECT_DOUBLE_EQ(e.coeffs[1], -1.0 / dt);
  EXPECT_DOUBLE_EQ(e.coeffs[3], 2.0 * k);
  // y[0][1] appears twice before merging.
  EXPECT_EQ(e.vars[1], e.vars[3]);
  EXPECT_EQ(merge_duplicates(e).size(), 6u);
}

TEST(Cont52Test, DimensionFormula) {
  for (auto [n, mm] : {std::pair{2, 2}, {5, 3}, {10, 10}, {250, 250}}) {
    const Cont52Config cfg{n, mm};
    Model m = gen_cont5_2(cfg);
    const auto dims = cont5_2_dimensions(cfg);
    EXPECT_EQ(m.num_variables(), dims.variables);
    EXPECT_EQ(m.num_constraints(), dims.constraints);
    EXPECT_EQ(to_column_form(m).a.nnz(), dims.nonzeros);
  }
}

TEST(Cont52Test, TargetProfile) {
  const auto g = Cont52Config{4, 4}.target_profile();
  ASSERT_EQ(g.size(), 5u);
  EXPECT_DOUBLE_EQ(g[0], 0.5);
  EXPECT_DOUBLE_EQ(g[2], 0.5 * (1 - 0.25));
  EXPECT_DOUBLE_EQ(g[4], 0.0);
}

TEST(Cont52Test, InvalidConfig) {
  EXPECT_THROW(gen_cont5_2({1, 5}), ConfigError);
  EXPECT_THROW(gen_cont5_2({5, 1}), ConfigError);
}

TEST(ClnlbeamTest, Dimensions) {
  NonlinearModel m = gen_clnlbeam({1});
  EXPECT_EQ(m.num_variables(), 6);
  EXPECT_EQ(m.num_constraints(), 2);
  for (std::int64_t n : {1, 7, 5000}) {
    NonlinearModel mm = gen_clnlbeam({n});
    EXPECT_EQ(mm.num_variables(), 3 * (n + 1));
    EXPECT_EQ(mm.num_constraints(), 2 * n);
    EXPECT_EQ(jacobian_entries(mm), 8 * n);
  }
  EXPECT_THROW(gen_clnlbeam({0}), ConfigError);
}

TEST(ClnlbeamTest, BoundsAsDeclared) {
  NonlinearModel m = gen_clnlbeam({3});
  for (int i = 0; i < 4; ++i) {
    EXPECT_EQ(m.lower_bounds()[i], -1.0);
    EXPECT_EQ(m.upper_bounds()[i], 1.0);
    EXPECT_EQ(m.lower_bounds()[4 + i], -0.05);
    EXPECT_EQ(m.upper_bounds()[4 + i], 0.05);
    EXPECT_EQ(m.lower_bounds()[8 + i], -kInfinity);
    EXPECT_EQ(m.upper_bounds()[8 + i], kInfinity);
  }
}

TEST(ClnlbeamTest, FamiliesShareKeys) {
  NonlinearModel m = gen_clnlbeam({3});
  const auto& rows = m.constraints();
  std::set<std::string> family1, family2;
  for (int i = 0; i < 3; ++i) family1.insert(canonical_key(rows[i].root).bytes);
  for (int i = 3; i < 6; ++i) family2.insert(canonical_key(rows[i].root).bytes);
  EXPECT_EQ(family1.size(), 1u);
  EXPECT_EQ(family2.size(), 1u);
  EXPECT_NE(*family1.begin(), *family2.begin());
}

TEST(ClnlbeamTest, ZeroPointIsFeasible) {
  NonlinearModel m = gen_clnlbeam({4});
  std::vector<double> x(m.num_variables(), 0.0);
  for (double g : evaluate_constraints(m, x)) EXPECT_EQ(g, 0.0);
}

TEST(Cont51Test, Constants) {
  const Cont51Config cfg{200};
  EXPECT_DOUBLE_EQ(cfg.a(), 8.0 * 200 * 200 / (std::numbers::pi * std::numbers::pi));
  EXPECT_DOUBLE_EQ(cfg.c(), 400.0 / std::numbers::pi);
}

TEST(Cont51Test, Dimensions) {
  NonlinearModel small = gen_cont5_1({2});
  EXPECT_EQ(small.num_constraints(), 6);
  for (std::int64_t n : {2, 3, 5, 20}) {
    NonlinearModel m = gen_cont5_1({n});
    const auto dims = cont5_1_dimensions({n});
    EXPECT_EQ(m.num_variables(), dims.variables);
    EXPECT_EQ(m.num_constraints(), dims.constraints);
    EXPECT_EQ(jacobian_entries(m), dims.nonzeros);
    EXPECT_EQ(dims.nonzeros, 6 * n * (n - 1) + 3 * n + 4 * n);
  }
  EXPECT_THROW(gen_cont5_1({1}), ConfigError);
}

TEST(Cont51Test, BoundaryRowHasQuarticTerm) {
  const std::int64_t n = 3;
  NonlinearModel m = gen_cont5_1({n});
  std::vector<double> x(m.num_variables(), 0.0);
  // y[2][4] is column (2-1)*(n+1) + 4 = 8, i.e. x[7].
  x[7] = 2.0;
  const auto g = evaluate_constraints(m, x);
  const double c = Cont51Config{n}.c();
  // First boundary row: c * 3 y + y + y * (y^2)^{3/2} with y = 2.
  EXPECT_DOUBLE_EQ(g[n * (n - 1) + n], c * 3.0 * 2.0 + 2.0 + 16.0);
}

}  // namespace
}  // namespace orkit
