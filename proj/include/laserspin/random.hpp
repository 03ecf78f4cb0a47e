#pragma once

// Seeded uniform sampling for randomized validation checks. mt19937_64 has a
// standardized sequence and the [0,1) mapping below avoids the library-defined
// (and implementation-varying) uniform_real_distribution, so sampled points
// are reproducible from the seed alone.

#include <cstdint>
#include <random>

namespace laserspin {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  // uniform in [0, 1)
  double unit() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }

  std::uint64_t raw() { return gen_(); }

 private:
  std::mt19937_64 gen_;
};

}  // namespace laserspin
