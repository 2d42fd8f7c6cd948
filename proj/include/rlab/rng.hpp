#pragma once

#include <cmath>
#include <cstdint>

namespace rlab {

// Counter-based uniform stream.  Each draw is a pure function of
// (seed, index, component), so any partitioning of the index space over
// threads reproduces the serial sweep bit for bit.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

  std::uint64_t seed() const { return seed_; }

  // 64 mixed bits for sample `index`, component `component`.
  std::uint64_t bits(std::uint64_t index, std::uint64_t component = 0) const {
    std::uint64_t z = seed_;
    z += (index + 1) * 0x9E3779B97F4A7C15ull;
    z += (component + 1) * 0xC2B2AE3D27D4EB4Full;
    z = mix(z);
    z = mix(z + 0x165667B19E3779F9ull);
    return z;
  }

  // uniform in [0, 1)
  double uniform(std::uint64_t index, std::uint64_t component = 0) const {
    return static_cast<double>(bits(index, component) >> 11) * 0x1.0p-53;
  }

  // uniform in [lo, hi)
  double uniform(std::uint64_t index, std::uint64_t component, double lo,
                 double hi) const {
    return lo + (hi - lo) * uniform(index, component);
  }

  // standard normal (Box-Muller, consumes components c and c+1)
  double normal(std::uint64_t index, std::uint64_t component) const {
    double u1 = uniform(index, component);
    double u2 = uniform(index, component + 1);
    if (u1 < 1e-300) u1 = 1e-300;
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(6.283185307179586476925286766559 * u2);
  }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ull;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBull;
    z ^= z >> 31;
    return z;
  }

  std::uint64_t seed_;
};

}  // namespace rlab
