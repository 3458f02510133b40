#pragma once

/**
 * Deterministic random streams.
 *
 * Every Monte Carlo run owns one xoshiro256++ stream, seeded from
 * (master_seed, run_index) through a fixed splitmix64-based mix. The mapping,
 * the state initialisation and the uniform-double convention are part of the
 * output contract: given the same configuration, traces are bit-identical
 * across repeated invocations, thread counts and SIMD backends. None of the
 * three may change silently.
 */

#include <cstdint>

namespace towbandit {

/// splitmix64 finalizer (Stafford mix13). Bijective on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ULL;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBULL;
  z ^= z >> 31;
  return z;
}

/// Child seed for one run: mix64(master + golden_gamma * (run_index + 1)).
/// The gamma is odd, so distinct run indices map to distinct mix inputs and,
/// mix64 being bijective, to distinct seeds.
constexpr std::uint64_t derive_run_seed(std::uint64_t master_seed,
                                        std::uint64_t run_index) noexcept {
  return mix64(master_seed + 0x9E3779B97F4A7C15ULL * (run_index + 1));
}

/**
 * xoshiro256++ (Blackman & Vigna). State is filled from a splitmix64
 * sequence started at the seed, the authors' recommended initialisation.
 *
 * next_unit() returns ((x >> 12) + 0.5) * 2^-52, a uniform double strictly
 * inside (0, 1). Every value is exact in IEEE double, so scalar and vector
 * code produce identical bits from identical raw words. Being bounded away
 * from 0 and 1 keeps the Gaussian inverse-CDF finite without special cases.
 */
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) noexcept {
    std::uint64_t sm = seed;
    for (auto& w : s_) {
      sm += 0x9E3779B97F4A7C15ULL;
      w = mix64(sm);
    }
  }

  std::uint64_t next_u64() noexcept {
    const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  /// Uniform double in the open interval (0, 1); consumes one raw word.
  double next_unit() noexcept {
    const std::uint64_t k = next_u64() >> 12;  // 52 bits
    return (static_cast<double>(k) + 0.5) * 0x1p-52;
  }

 private:
  static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept {
    return (x << k) | (x >> (64 - k));
  }
  std::uint64_t s_[4];
};

}  // namespace towbandit
