#pragma once

#include <cmath>
#include <cstdint>

namespace wrelm {

// splitmix64 (Steele/Lea/Flood). Every randomized artifact in this project
// (input weights, synthetic streams) derives from this generator so that a
// given seed reproduces results bit-for-bit on the same build.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1), 53-bit resolution.
  double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform in [lo, hi).
  double next_uniform(double lo, double hi) { return lo + next_unit() * (hi - lo); }

  // Uniform integer in [lo, hi] inclusive.
  std::int64_t next_int(std::int64_t lo, std::int64_t hi) {
    const double u = next_unit();
    const auto span = static_cast<double>(hi - lo + 1);
    auto k = static_cast<std::int64_t>(u * span);
    if (k > hi - lo) k = hi - lo;  // guard the u ~ 1 edge
    return lo + k;
  }

 private:
  std::uint64_t state_;
};

// Box-Muller transform over a SplitMix64 stream. Draws two uniforms per
// pair and caches the second sample, so consumption order is part of the
// pinned sequence.
class BoxMuller {
 public:
  double next(SplitMix64& rng) {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    // u1 in (0, 1] keeps log() finite.
    const double u1 = static_cast<double>((rng.next_u64() >> 11) + 1) * 0x1.0p-53;
    const double u2 = rng.next_unit();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * M_PI * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
  }

 private:
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace wrelm
