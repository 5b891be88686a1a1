#pragma once

#include <cmath>
#include <cstdint>

namespace dlamps {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

/// Counter-based random source: every draw is a pure function of
/// (seed, index), so evaluation order and parallel decomposition cannot
/// change the stream.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed) : seed_(splitmix64(seed)) {}

  std::uint64_t raw(std::uint64_t index) const {
    return splitmix64(seed_ ^ (splitmix64(index) + 0x9E3779B97F4A7C15ull));
  }

  /// Uniform double in [0, 1).
  double uniform(std::uint64_t index) const {
    return static_cast<double>(raw(index) >> 11) * 0x1.0p-53;
  }

  /// Standard normal via Box-Muller on two sub-draws of the counter.
  double gaussian(std::uint64_t index) const {
    const std::uint64_t a = raw(2 * index);
    const std::uint64_t b = raw(2 * index + 1);
    const double u1 = (static_cast<double>(a >> 11) + 1.0) * 0x1.0p-53;  // (0,1]
    const double u2 = static_cast<double>(b >> 11) * 0x1.0p-53;          // [0,1)
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
  }

  /// Bernoulli draw with success probability p.
  bool bernoulli(std::uint64_t index, double p) const { return uniform(index) < p; }

 private:
  std::uint64_t seed_;
};

}  // namespace dlamps
