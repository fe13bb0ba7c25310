// ipod: outlier detection and robust regression via iterative thresholding
// Copyright 2026 The ipod Authors
// Licensed under the Apache License, Version 2.0

#pragma once

#include <cmath>
#include <cstdint>

namespace ipod {

/// Counter-based 64-bit generator (splitmix64 output function applied to a
/// Weyl sequence).  Streams are derived by hashing (seed, stream) so that
/// replicate k of a study gets its own generator independent of scheduling:
/// identical seeds give identical draws no matter how work is partitioned
/// across threads.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0)
      : state_(mix(seed + 0x9e3779b97f4a7c15ULL * (stream + 1))) {}

  /// Derive a child generator for an independent stream (replicate, subset, ...).
  [[nodiscard]] CounterRng spawn(std::uint64_t stream) const {
    CounterRng child(0);
    child.state_ = mix(state_ ^ (0xbf58476d1ce4e5b9ULL * (stream + 1)));
    return child;
  }

  std::uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ULL;
    return mix(state_);
  }

  /// Uniform on [0, 1) with 53-bit resolution.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform on [a, b).
  double uniform(double a, double b) { return a + uniform() * (b - a); }

  /// Integer uniform on [0, n) by rejection (unbiased).
  std::uint64_t uniform_index(std::uint64_t n) {
    const std::uint64_t limit = n * (UINT64_MAX / n);
    std::uint64_t v;
    do {
      v = next_u64();
    } while (v >= limit);
    return v % n;
  }

  /// Standard normal via Box-Muller; the spare draw is cached.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    double u2 = uniform();
    if (u1 < 1e-300) u1 = 1e-300;
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 6.283185307179586476925286766559 * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
  }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xbf58476d1ce4e5b9ULL;
    z ^= z >> 27;
    z *= 0x94d049bb133111ebULL;
    z ^= z >> 31;
    return z;
  }

  std::uint64_t state_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace ipod
