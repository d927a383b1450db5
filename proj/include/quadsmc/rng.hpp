#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace quadsmc {

/// Deterministic RNG wrapper. Distributions are implemented by hand so
/// streams are identical across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  /// Derive an independent stream for a sub-task (e.g. trial index).
  static Rng derive(std::uint64_t seed, std::uint64_t index) {
    std::seed_seq seq{seed, index};
    std::mt19937_64 g(seq);
    Rng r(0);
    r.gen_ = g;
    return r;
  }

  std::uint64_t next_u64() { return gen_(); }

  /// Uniform in [0, 1).
  double uniform() { return std::ldexp(static_cast<double>(gen_() >> 11), -53); }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniformly distributed unit vector.
  template <typename Vec3T>
  Vec3T unit_vector() {
    // Marsaglia rejection on the disc.
    for (;;) {
      const double a = uniform(-1.0, 1.0);
      const double b = uniform(-1.0, 1.0);
      const double s = a * a + b * b;
      if (s >= 1.0 || s == 0.0) continue;
      const double t = 2.0 * std::sqrt(1.0 - s);
      return Vec3T(a * t, b * t, 1.0 - 2.0 * s);
    }
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace quadsmc
