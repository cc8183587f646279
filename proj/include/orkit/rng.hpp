#pragma once

#include <cstdint>

namespace orkit {

// SplitMix64 (Steele, Lea & Flood). Every randomized path in the library
// draws from this generator so outputs are identical across standard library
// implementations; the <random> distributions are implementation-defined.
class SplitMix64 {
 public:
  static constexpr const char* kName = "splitmix64/1";

  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform integer on [0, bound). Uses rejection to stay unbiased.
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t limit = bound == 0 ? 0 : (~std::uint64_t{0} - bound + 1) % bound;
    std::uint64_t r = next();
    while (r < limit) r = next();
    return bound == 0 ? 0 : r % bound;
  }

  // Independent child stream.
  SplitMix64 split() { return SplitMix64(next()); }

 private:
  std::uint64_t state_;
};

inline constexpr std::uint64_t kDefaultSeed = 20130521;

}  // namespace orkit
