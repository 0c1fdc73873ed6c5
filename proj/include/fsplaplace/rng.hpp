#pragma once

#include "fsplaplace/types.hpp"

#include <cmath>
#include <cstdint>

namespace fsp {

// Deterministic generators built on splitmix64. The standard library
// distributions are implementation-defined, which would break the
// byte-identical-artifact guarantee across toolchains.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t nextU64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform on [0, 1) with 53-bit resolution.
  Scalar uniform01() {
    return static_cast<Scalar>(nextU64() >> 11) * 0x1.0p-53;
  }

  Scalar uniform(Scalar lo, Scalar hi) { return lo + (hi - lo) * uniform01(); }

  /// Standard normal via Box-Muller; one value per call, no caching.
  Scalar normal() {
    Scalar u1 = uniform01();
    while (u1 <= 0.0) u1 = uniform01();
    const Scalar u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * 3.14159265358979323846 * u2);
  }

  Vector normalVector(Index n) {
    Vector v(n);
    for (Index i = 0; i < n; ++i) v[i] = normal();
    return v;
  }

  /// Index in [0, n).
  Index uniformIndex(Index n) {
    return static_cast<Index>(nextU64() % static_cast<std::uint64_t>(n));
  }

 private:
  std::uint64_t state_;
};

/// Derives independent per-event seeds from a base seed and an event counter,
/// so resampling stays reproducible regardless of evaluation order.
class SeedStream {
 public:
  explicit SeedStream(std::uint64_t base) : base_(base) {}

  std::uint64_t at(std::uint64_t counter) const {
    std::uint64_t z = base_ ^ (counter * 0xd1342543de82ef95ULL + 0x2545f4914f6cdd1dULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  Rng rngAt(std::uint64_t counter) const { return Rng(at(counter)); }

 private:
  std::uint64_t base_;
};

}  // namespace fsp
