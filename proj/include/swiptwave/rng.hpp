// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <cstdint>

namespace swipt {

/// Deterministic splitmix64-based generator. Used instead of <random>
/// distributions so that results are reproducible across standard-library
/// implementations; every consumer derives per-item seeds so evaluation
/// order never changes the stream.
class Rng {
 public:
  explicit Rng(uint64_t seed) : state_(seed) {}

  uint64_t next_u64() {
    uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Standard normal via Box-Muller (no cached spare, keeps the stream
  /// position independent of call parity).
  double normal() {
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
  }

  /// Derives an independent stream for item `index` of the stream owner.
  static uint64_t derive(uint64_t master_seed, uint64_t index) {
    Rng mix(master_seed ^ (0xd1342543de82ef95ULL * (index + 1)));
    return mix.next_u64();
  }

 private:
  uint64_t state_;
};

}  // namespace swipt
