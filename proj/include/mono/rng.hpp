#pragma once

#include <cstdint>

namespace mono {

/// Counter-based splittable PRNG (SplitMix64 core).
///
/// Every stream is fully determined by a 64-bit state, and child streams are
/// derived by hashing (parent state, child index). Monte Carlo code gives each
/// trial its own stream via substream(trial_index), so serial and parallel
/// schedules produce identical results. All draws are platform-stable: no
/// std::uniform_*_distribution anywhere.
class RngStream {
 public:
  RngStream() : state_(mix(0x9E3779B97F4A7C15ULL)) {}

  static RngStream from_seed(uint64_t seed) {
    RngStream r;
    r.state_ = mix(seed + 0x9E3779B97F4A7C15ULL);
    return r;
  }

  /// Independent child stream; does not advance this stream.
  RngStream substream(uint64_t index) const {
    RngStream r;
    r.state_ = mix(state_ ^ mix(index + 0xBF58476D1CE4E5B9ULL));
    return r;
  }

  uint64_t next_u64() {
    state_ += 0x9E3779B97F4A7C15ULL;
    return mix(state_);
  }

  /// Uniform on {0, ..., bound-1}, unbiased (Lemire rejection). bound >= 1.
  uint64_t below(uint64_t bound) {
    unsigned __int128 m = static_cast<unsigned __int128>(next_u64()) * bound;
    auto lo = static_cast<uint64_t>(m);
    if (lo < bound) {
      uint64_t threshold = (0 - bound) % bound;
      while (lo < threshold) {
        m = static_cast<unsigned __int128>(next_u64()) * bound;
        lo = static_cast<uint64_t>(m);
      }
    }
    return static_cast<uint64_t>(m >> 64);
  }

  /// Uniform double in [0, 1), 53 random bits.
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  bool next_bool() { return next_u64() >> 63; }

  /// SplitMix64 finalizer; also used as a standalone 64-bit hash.
  static uint64_t mix(uint64_t x) {
    x ^= x >> 30;
    x *= 0xBF58476D1CE4E5B9ULL;
    x ^= x >> 27;
    x *= 0x94D049BB133111EBULL;
    x ^= x >> 31;
    return x;
  }

 private:
  uint64_t state_;
};

}  // namespace mono
