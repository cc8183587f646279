#pragma once

#include <cstdint>
#include <vector>

#include "orkit/model.hpp"
#include "orkit/nlexpr.hpp"
#include "orkit/rng.hpp"

namespace orkit {

// Facility location: place `facilities` of `locations` sites to serve
// `customers` placed at random points of [1, locations].
struct PMedianConfig {
  std::int64_t locations = 1000;   // L
  std::int64_t facilities = 100;   // M
  std::int64_t customers = 100;    // N
  std::uint64_t seed = kDefaultSeed;
};

// Discretized linear-quadratic heat control problem with the quadratic
// objective dropped.
struct Cont52Config {
  std::int64_t space_steps = 250;  // N
  std::int64_t time_steps = 250;   // M

  double dx() const { return 1.0 / static_cast<double>(space_steps); }
  double dt() const { return 1.0 / static_cast<double>(time_steps); }
  // Terminal profile g_j = (1 - (j dx)^2) / 2. Unused by the constraints.
  std::vector<double> target_profile() const;
};

struct ClnlbeamConfig {
  std::int64_t n = 5000;

  double h() const { return 1.0 / static_cast<double>(n); }
};

struct Cont51Config {
  std::int64_t n = 200;

  double a() const;
  double c() const;
};

// Throws ConfigError on invalid parameters.
Model gen_pmedian(const PMedianConfig& cfg);
Model gen_cont5_2(const Cont52Config& cfg);
NonlinearModel gen_clnlbeam(const ClnlbeamConfig& cfg);
NonlinearModel gen_cont5_1(const Cont51Config& cfg);

// Customer locations drawn by gen_pmedian, exposed for tests and reports.
std::vector<double> pmedian_customer_locations(const PMedianConfig& cfg);

// Expected sizes of each family, from closed-form counts.
struct InstanceDimensions {
  std::int64_t variables = 0;
  std::int64_t constraints = 0;
  std::int64_t nonzeros = 0;  // merged matrix or Jacobian entries
};

InstanceDimensions pmedian_dimensions(const PMedianConfig& cfg);
InstanceDimensions cont5_2_dimensions(const Cont52Config& cfg);
InstanceDimensions clnlbeam_dimensions(const ClnlbeamConfig& cfg);
InstanceDimensions cont5_1_dimensions(const Cont51Config& cfg);

}  // namespace orkit
