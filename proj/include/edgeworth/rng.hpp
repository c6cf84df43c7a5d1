#pragma once

#include <cstdint>

namespace edgeworth {

/// SplitMix64 (Steele, Lea & Flood). Output is fully specified by the seed,
/// so streams are identical on every platform.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  static constexpr std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t next() {
    state_ += 0x9e3779b97f4a7c15ULL;
    return mix(state_);
  }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

 private:
  std::uint64_t state_;
};

/// Seed of the substream owned by (trial, period, slot): seed xor a hash of
/// the triple. Slots 0..N-1 are sellers, slot N is the demand draw.
constexpr std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t trial,
                                       std::uint64_t period, std::uint64_t slot) {
  std::uint64_t h = SplitMix64::mix(trial + 0x9e3779b97f4a7c15ULL);
  h = SplitMix64::mix(h ^ (period + 0x632be59bd9b4e019ULL));
  h = SplitMix64::mix(h ^ (slot + 0x85157af5a1e3c2c1ULL));
  return seed ^ h;
}

}  // namespace edgeworth
