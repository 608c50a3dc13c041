#pragma once

#include <cmath>
#include <cstdint>
#include <limits>

namespace particleforge::rng {

// Counter-based random streams. Every uniform is a pure function of
// (seed, lane, key1, key2, counter), so growing a window or reordering a
// replica sweep never changes the draw any retained object sees.

/// Stream lanes. Values are part of the on-disk reproducibility contract;
/// never renumber.
enum class Lane : std::uint64_t {
  kLrpEdge = 1,
  kGrgRadius = 2,
  kClock = 3,
  kMark = 4,
  kUpdate = 5,
  kInitial = 6,
  kProbe = 7,
  kScratch = 8,
};

inline constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Zigzag encoding so signed lattice coordinates can key streams.
inline constexpr std::uint64_t zigzag(std::int64_t i) {
  return (static_cast<std::uint64_t>(i) << 1) ^ static_cast<std::uint64_t>(i >> 63);
}

class Stream {
 public:
  Stream(std::uint64_t seed, Lane lane, std::uint64_t k1 = 0, std::uint64_t k2 = 0)
      : base_(mix64(mix64(mix64(mix64(seed) ^ static_cast<std::uint64_t>(lane)) ^ k1) ^ k2)) {}

  std::uint64_t bits(std::uint64_t counter) const {
    return mix64(base_ + 0x9e3779b97f4a7c15ULL * (counter + 1));
  }

  /// Uniform on [0,1).
  double uniform(std::uint64_t counter) const {
    return static_cast<double>(bits(counter) >> 11) * 0x1.0p-53;
  }

  /// Uniform on (0,1]; safe as a log argument.
  double uniform_pos(std::uint64_t counter) const {
    return static_cast<double>((bits(counter) >> 11) + 1) * 0x1.0p-53;
  }

 private:
  std::uint64_t base_;
};

/// Sequential view over a Stream, for call sites that consume a variable
/// number of draws.
class Sequence {
 public:
  explicit Sequence(Stream s) : stream_(s) {}
  Sequence(std::uint64_t seed, Lane lane, std::uint64_t k1 = 0, std::uint64_t k2 = 0)
      : stream_(seed, lane, k1, k2) {}

  std::uint64_t next_bits() { return stream_.bits(counter_++); }
  double next_uniform() { return stream_.uniform(counter_++); }
  double next_uniform_pos() { return stream_.uniform_pos(counter_++); }

  /// Exponential inter-arrival; rate must be > 0.
  double next_exponential(double rate) {
    double e = -std::log(next_uniform_pos()) / rate;
    // Zero-length gaps would break the strict ordering of clock times.
    return e > 0.0 ? e : std::numeric_limits<double>::min();
  }

 private:
  Stream stream_;
  std::uint64_t counter_ = 0;
};

}  // namespace particleforge::rng
