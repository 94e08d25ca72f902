#pragma once

#include <cstdint>
#include <random>

namespace nav2d::util {

/// Deterministic RNG with platform-independent double extraction (the
/// standard distributions are implementation-defined, which would break
/// bit-stable reports across toolchains).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  /// Independent stream for item `salt` of a batch; lets parallel loops draw
  /// identical numbers regardless of thread count.
  static Rng forked(std::uint64_t seed, std::uint64_t salt) {
    return Rng(seed ^ (salt * 0x9e3779b97f4a7c15ull) ^ 0x6a09e667f3bcc909ull);
  }

  std::uint64_t next() { return eng_(); }

  /// Uniform double in [a, b).
  double uniform(double a, double b) {
    const double u = static_cast<double>(eng_() >> 11) * 0x1.0p-53;
    return a + (b - a) * u;
  }

  /// Uniform integer in [0, n).
  int uniform_int(int n) { return static_cast<int>(eng_() % static_cast<std::uint64_t>(n)); }

  bool bernoulli(double p) { return uniform(0.0, 1.0) < p; }

 private:
  std::mt19937_64 eng_;
};

}  // namespace nav2d::util
