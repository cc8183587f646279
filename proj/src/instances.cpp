#include "orkit/instances.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "orkit/errors.hpp"

namespace orkit {
namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw ConfigError(what);
}

void validate(const PMedianConfig& cfg) {
  require(cfg.customers >= 1, "p-median: need at least one customer");
  require(cfg.facilities >= 1 && cfg.facilities <= cfg.locations,
          "p-median: facility count must be in [1, locations]");
}

}  // namespace

std::vector<double> Cont52Config::target_profile() const {
  std::vector<double> g(space_steps + 1);
  for (std::int64_t j = 0; j <= space_steps; ++j) {
    const double x = static_cast<double>(j) * dx();
    g[j] = 0.5 * (1.0 - x * x);
  }
  return g;
}

double Cont51Config::a() const {
  const double nn = static_cast<double>(n);
  return 8.0 * nn * nn / (std::numbers::pi * std::numbers::pi);
}

double Cont51Config::c() const { return 2.0 * static_cast<double>(n) / std::numbers::pi; }

std::vector<double> pmedian_customer_locations(const PMedianConfig& cfg) {
  validate(cfg);
  SplitMix64 rng(cfg.seed);
  std::vector<double> c(cfg.customers);
  for (auto& ci : c) ci = rng.uniform(1.0, static_cast<double>(cfg.locations));
  return c;
}

Model gen_pmedian(const PMedianConfig& cfg) {
  validate(cfg);
  const std::int64_t L = cfg.locations;
  const std::int64_t N = cfg.customers;
  const std::vector<double> location = pmedian_customer_locations(cfg);

  Model m(ObjectiveSense::kMinimize);
  m.reserve(static_cast<std::size_t>(N * L + L), static_cast<std::size_t>(N * L + N + 1));
  // x[i][j] is column i * L + j + 1; y[j] follows all of x.
  std::vector<VariableRef> x;
  x.reserve(static_cast<std::size_t>(N * L));
  for (std::int64_t k = 0; k < N * L; ++k) x.push_back(m.add_variable(0.0, 1.0));
  std::vector<VariableRef> y;
  y.reserve(static_cast<std::size_t>(L));
  for (std::int64_t j = 0; j < L; ++j) y.push_back(m.add_variable(0.0, 1.0));

  AffineExpression objective(static_cast<std::size_t>(N * L));
  for (std::int64_t i = 0; i < N; ++i) {
    for (std::int64_t j = 0; j < L; ++j) {
      add_to_expression(objective, std::fabs(location[i] - static_cast<double>(j + 1)),
                        x[i * L + j]);
    }
  }
  m.set_objective(std::move(objective));

  for (std::int64_t i = 0; i < N; ++i) {
    for (std::int64_t j = 0; j < L; ++j) {
      AffineExpression e(2);
      add_to_expression(e, 1.0, x[i * L + j]);
      add_to_expression(e, -1.0, y[j]);
      m.add_constraint(std::move(e), RowSense::kLessEqual);
    }
  }
  for (std::int64_t i = 0; i < N; ++i) {
    AffineExpression e(static_cast<std::size_t>(L));
    for (std::int64_t j = 0; j < L; ++j) add_to_expression(e, 1.0, x[i * L + j]);
    add_to_expression(e, -1.0);
    m.add_constraint(std::move(e), RowSense::kEqual);
  }
  AffineExpression open(static_cast<std::size_t>(L));
  for (std::int64_t j = 0; j < L; ++j) add_to_expression(open, 1.0, y[j]);
  add_to_expression(open, -static_cast<double>(cfg.facilities));
  m.add_constraint(std::move(open), RowSense::kEqual);
  return m;
}

Model gen_cont5_2(const Cont52Config& cfg) {
  require(cfg.space_steps >= 2 && cfg.time_steps >= 2, "cont5_2: grid sizes must be >= 2");
  const std::int64_t N = cfg.space_steps;
  const std::int64_t M = cfg.time_steps;
  const double dt = cfg.dt();
  const double dx = cfg.dx();
  const double k = 1.0 / (2.0 * dx * dx);

  Model m(ObjectiveSense::kMinimize);
  const InstanceDimensions dims = cont5_2_dimensions(cfg);
  m.reserve(static_cast<std::size_t>(dims.variables), static_cast<std::size_t>(dims.constraints));

  // y[i][j] for i = 0..M, j = 0..N, then u[i] for i = 1..M.
  std::vector<VariableRef> y;
  y.reserve(static_cast<std::size_t>((M + 1) * (N + 1)));
  for (std::int64_t i = 0; i <= M; ++i) {
    for (std::int64_t j = 0; j <= N; ++j) {
      y.push_back(i == 0 ? m.add_variable(0.0, 0.0) : m.add_variable(0.0, 1.0));
    }
  }
  auto Y = [&](std::int64_t i, std::int64_t j) { return y[i * (N + 1) + j]; };
  std::vector<VariableRef> u;
  u.reserve(static_cast<std::size_t>(M));
  for (std::int64_t i = 1; i <= M; ++i) u.push_back(m.add_variable(-1.0, 1.0));

  // (y[i+1][j] - y[i][j]) / dt
  //   = k (y[i][j-1] - 2 y[i][j] + y[i][j+1] + y[i+1][j-1] - 2 y[i+1][j] + y[i+1][j+1])
  for (std::int64_t i = 0; i < M; ++i) {
    for (std::int64_t j = 1; j < N; ++j) {
      AffineExpression e(8);
      add_to_expression(e, 1.0 / dt, Y(i + 1, j));
      add_to_expression(e, -1.0 / dt, Y(i, j));
      add_to_expression(e, -k, Y(i, j - 1));
      add_to_expression(e, 2.0 * k, Y(i, j));
      add_to_expression(e, -k, Y(i, j + 1));
      add_to_expression(e, -k, Y(i + 1, j - 1));
      add_to_expression(e, 2.0 * k, Y(i + 1, j));
      add_to_expression(e, -k, Y(i + 1, j + 1));
      m.add_constraint(std::move(e), RowSense::kEqual);
    }
  }
  for (std::int64_t i = 1; i <= M; ++i) {
    AffineExpression e(3);
    add_to_expression(e, 1.0, Y(i, 2));
    add_to_expression(e, -4.0, Y(i, 1));
    add_to_expression(e, 3.0, Y(i, 0));
    m.add_constraint(std::move(e), RowSense::kEqual);
  }
  // y[i][N-2] - 4 y[i][N-1] + 3 y[i][N] = 2 dx (u[i] - y[i][N])
  for (std::int64_t i = 1; i <= M; ++i) {
    AffineExpression e(5);
    add_to_expression(e, 1.0, Y(i, N - 2));
    add_to_expression(e, -4.0, Y(i, N - 1));
    add_to_expression(e, 3.0, Y(i, N));
    add_to_expression(e, -2.0 * dx, u[i - 1]);
    add_to_expression(e, 2.0 * dx, Y(i, N));
    m.add_constraint(std::move(e), RowSense::kEqual);
  }
  return m;
}

NonlinearModel gen_clnlbeam(const ClnlbeamConfig& cfg) {
  require(cfg.n >= 1, "clnlbeam: n must be >= 1");
  const std::int64_t n = cfg.n;
  const double half_h = 0.5 * cfg.h();

  NonlinearModel m;
  m.reserve(static_cast<std::size_t>(3 * (n + 1)), static_cast<std::size_t>(2 * n));
  std::vector<VariableRef> t, x, u;
  for (std::int64_t i = 0; i <= n; ++i) t.push_back(m.add_variable(-1.0, 1.0));
  for (std::int64_t i = 0; i <= n; ++i) x.push_back(m.add_variable(-0.05, 0.05));
  for (std::int64_t i = 0; i <= n; ++i) u.push_back(m.add_variable(-kInfinity, kInfinity));

  using expr::constant;
  using expr::variable;
  // x[i+1] - x[i] - (0.5h)*(sin(t[i+1]) + sin(t[i])) == 0
  for (std::int64_t i = 0; i < n; ++i) {
    m.add_constraint(variable(x[i + 1]) - variable(x[i]) -
                     constant(half_h) * (expr::sin(variable(t[i + 1])) + expr::sin(variable(t[i]))));
  }
  // t[i+1] - t[i] - (0.5h)*u[i+1] - (0.5h)*u[i] == 0
  for (std::int64_t i = 0; i < n; ++i) {
    m.add_constraint(variable(t[i + 1]) - variable(t[i]) - constant(half_h) * variable(u[i + 1]) -
                     constant(half_h) * variable(u[i]));
  }
  return m;
}

NonlinearModel gen_cont5_1(const Cont51Config& cfg) {
  require(cfg.n >= 2, "cont5_1: n must be >= 2");
  const std::int64_t n = cfg.n;
  const double a = cfg.a();
  const double c = cfg.c();

  NonlinearModel m;
  m.reserve(static_cast<std::size_t>((n + 1) * (n + 1) + n), static_cast<std::size_t>(n * (n + 1)));
  // y[i][j] with 1-based i, j in 1..n+1, then u[i] for i in 1..n.
  std::vector<VariableRef> y;
  for (std::int64_t k = 0; k < (n + 1) * (n + 1); ++k) {
    y.push_back(m.add_variable(-kInfinity, kInfinity));
  }
  std::vector<VariableRef> u;
  for (std::int64_t i = 0; i < n; ++i) u.push_back(m.add_variable(-kInfinity, kInfinity));
  auto Y = [&](std::int64_t i, std::int64_t j) {
    return expr::variable(y[(i - 1) * (n + 1) + (j - 1)]);
  };
  using expr::constant;

  // n (y[i+1][j+1] - y[i][j+1])
  //   - a (y[i][j] - 2 y[i][j+1] + y[i][j+2] + y[i+1][j] - 2 y[i+1][j+1] + y[i+1][j+2]) == 0
  for (std::int64_t i = 1; i <= n; ++i) {
    for (std::int64_t j = 1; j <= n - 1; ++j) {
      ExpressionNode stencil = Y(i, j) - constant(2.0) * Y(i, j + 1) + Y(i, j + 2) + Y(i + 1, j) -
                               constant(2.0) * Y(i + 1, j + 1) + Y(i + 1, j + 2);
      m.add_constraint(constant(static_cast<double>(n)) * (Y(i + 1, j + 1) - Y(i, j + 1)) -
                       constant(a) * std::move(stencil));
    }
  }
  // y[i+1][3] - 4 y[i+1][2] + 3 y[i+1][1] == 0
  for (std::int64_t i = 1; i <= n; ++i) {
    m.add_constraint(Y(i + 1, 3) - constant(4.0) * Y(i + 1, 2) + constant(3.0) * Y(i + 1, 1));
  }
  // c (y[i+1][n-1] - 4 y[i+1][n] + 3 y[i+1][n+1]) + y[i+1][n+1] - u[i]
  //   + y[i+1][n+1] ((y[i+1][n+1])^2)^(3/2) == 0
  for (std::int64_t i = 1; i <= n; ++i) {
    ExpressionNode boundary =
        Y(i + 1, n - 1) - constant(4.0) * Y(i + 1, n) + constant(3.0) * Y(i + 1, n + 1);
    ExpressionNode cubic =
        Y(i + 1, n + 1) * expr::power(expr::power(Y(i + 1, n + 1), Rational(2)), Rational(3, 2));
    m.add_constraint(constant(c) * std::move(boundary) + Y(i + 1, n + 1) -
                     expr::variable(u[i - 1]) + std::move(cubic));
  }
  return m;
}

InstanceDimensions pmedian_dimensions(const PMedianConfig& cfg) {
  const std::int64_t NL = cfg.customers * cfg.locations;
  return {NL + cfg.locations, NL + cfg.customers + 1, 3 * NL + cfg.locations};
}

InstanceDimensions cont5_2_dimensions(const Cont52Config& cfg) {
  const std::int64_t N = cfg.space_steps;
  const std::int64_t M = cfg.time_steps;
  return {(M + 1) * (N + 1) + M, M * (N - 1) + 2 * M, 6 * M * (N - 1) + 7 * M};
}

InstanceDimensions clnlbeam_dimensions(const ClnlbeamConfig& cfg) {
  return {3 * (cfg.n + 1), 2 * cfg.n, 8 * cfg.n};
}

InstanceDimensions cont5_1_dimensions(const Cont51Config& cfg) {
  const std::int64_t n = cfg.n;
  return {(n + 1) * (n + 1) + n, n * (n + 1), 6 * n * (n - 1) + 3 * n + 4 * n};
}

}  // namespace orkit
