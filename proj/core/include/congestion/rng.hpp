#pragma once

#include <cstdint>

namespace congestion {

/// Splittable deterministic generator (splitmix64). All randomness in the
/// library flows from one 64-bit seed through instances of this type, so
/// results are reproducible bit-for-bit across runs and platforms.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform double in [0, 1).
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, n). n must be positive.
  std::uint64_t below(std::uint64_t n) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(next()) * n) >> 64);
  }

  /// Child generator with an independent stream.
  SplitMix64 split() { return SplitMix64(next()); }

 private:
  std::uint64_t state_;
};

}  // namespace congestion
