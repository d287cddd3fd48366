#ifndef SEMIREL_RNG_HPP
#define SEMIREL_RNG_HPP

#include <cstdint>

namespace semirel {

// SplitMix64 (Steele, Lea, Flood 2014), algorithm version 1. Streams are keyed
// by (seed, index) so that sample i is reproducible regardless of how many
// samples are drawn or how work is scheduled.
class SplitMix64 {
 public:
  static constexpr int algorithm_version = 1;

  explicit constexpr SplitMix64(std::uint64_t state) : state_(state) {}

  static constexpr SplitMix64 stream(std::uint64_t seed, std::uint64_t index) {
    SplitMix64 key(seed);
    const std::uint64_t a = key.next();
    SplitMix64 mix(a ^ (index * 0xD1B54A32D192ED03ULL));
    return SplitMix64(mix.next());
  }

  constexpr std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Uniform on [0, 1) with 53 random bits.
  constexpr double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

 private:
  std::uint64_t state_;
};

}  // namespace semirel

#endif  // SEMIREL_RNG_HPP
