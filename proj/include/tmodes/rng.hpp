#pragma once
#include <cstdint>

// Counter-derived random streams: trajectory i draws from a private generator
// that is a pure function of (base_seed, i), so ensemble results cannot depend
// on worker scheduling.

namespace tmodes::rng {

// SplitMix64 (Steele, Lea, Flood): used to expand a 64-bit seed into generator state.
struct SplitMix64 {
  std::uint64_t state;
  explicit constexpr SplitMix64(std::uint64_t s) : state(s) {}
  constexpr std::uint64_t next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
};

// xoshiro256++ (Blackman & Vigna, public domain reference implementation).
struct Xoshiro256pp {
  std::uint64_t s[4];

  explicit Xoshiro256pp(std::uint64_t seed) {
    SplitMix64 sm(seed);
    for (auto& w : s) w = sm.next();
  }

  static constexpr std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  std::uint64_t next() {
    const std::uint64_t result = rotl(s[0] + s[3], 23) + s[0];
    const std::uint64_t t = s[1] << 17;
    s[2] ^= s[0];
    s[3] ^= s[1];
    s[1] ^= s[2];
    s[0] ^= s[3];
    s[2] ^= t;
    s[3] = rotl(s[3], 45);
    return result;
  }

  // uniform on [0, 1), 53-bit resolution
  double u01() { return double(next() >> 11) * 0x1.0p-53; }

  // uniform on (0, 1): half-ulp offset keeps log() finite
  double u01_open() { return (double(next() >> 11) + 0.5) * 0x1.0p-53; }
};

// Private stream for one trajectory. The multiplier decorrelates consecutive
// indices before SplitMix64 expands them into state.
inline Xoshiro256pp trajectory_stream(std::uint64_t base_seed, std::uint64_t index) {
  return Xoshiro256pp(base_seed ^ (0x9e3779b97f4a7c15ULL * (index + 1)));
}

}  // namespace tmodes::rng
