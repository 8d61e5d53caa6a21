#pragma once

#include <cmath>
#include <cstdint>

#include "ctb/types.hpp"

namespace ctb {

/// Deterministic splittable RNG stream (SplitMix64 core).
///
/// All randomness in the library flows through this type so that results are
/// reproducible byte-for-byte across platforms: no standard-library
/// distributions are used anywhere. Distinct streams derived via
/// split_seed() are independent and may run in parallel.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Uniform double in (0, 1]; safe as a log() argument.
  double next_double_open() { return 1.0 - next_double(); }

  /// Standard normal variate via Box-Muller (pairs cached).
  double next_gaussian() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = next_double_open();
    const double u2 = next_double();
    const double m = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * M_PI * u2;
    spare_ = m * std::sin(a);
    has_spare_ = true;
    return m * std::cos(a);
  }

  /// n i.i.d. standard normal coordinates.
  Vec next_gaussian_vec(Index n) {
    Vec v(n);
    for (Index i = 0; i < n; ++i) v[i] = next_gaussian();
    return v;
  }

  /// Uniform point on the origin-centered sphere of radius r in R^n.
  Vec next_sphere_point(Index n, double r) {
    Vec v = next_gaussian_vec(n);
    const double norm = v.norm();
    if (norm == 0.0) return next_sphere_point(n, r);
    return v * (r / norm);
  }

  /// Uniform integer in [0, bound) without modulo bias.
  std::uint64_t next_below(std::uint64_t bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
      const std::uint64_t v = next_u64();
      if (v >= threshold) return v % bound;
    }
  }

 private:
  std::uint64_t state_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// Stable child-seed derivation: hash of (parent seed, cell index).
/// Sweep cells and parallel trials each own a stream derived this way.
inline std::uint64_t split_seed(std::uint64_t parent, std::uint64_t index) {
  std::uint64_t z = parent ^ (0x9e3779b97f4a7c15ULL * (index + 1));
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace ctb
