#pragma once

#include <cstdint>
#include <random>

namespace heatchan {

// Seed derivation used by every stochastic routine in the library.
//
// All Monte Carlo loops draw from per-trial engines seeded with
// derive_seed(master, stream, index), so results do not depend on
// execution order. The mixing constants below are part of the
// reproducibility contract: identical (master seed, stream, index)
// always yields the identical engine. Draw streams are those of
// std::mt19937_64 with the standard library's distributions, so
// bit-compatibility holds within one toolchain, not across languages.

inline constexpr std::uint64_t kSeedGolden = 0x9E3779B97F4A7C15ULL;

/// splitmix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ULL;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBULL;
  z ^= z >> 31;
  return z;
}

constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream,
                                    std::uint64_t index) {
  std::uint64_t s = mix64(master + kSeedGolden * (stream + 1));
  return mix64(s + kSeedGolden * (index + 1));
}

// Stream tags. One tag per independent consumer of randomness.
namespace streams {
inline constexpr std::uint64_t kChannelNoise = 1;
inline constexpr std::uint64_t kMixtureTrial = 2;
inline constexpr std::uint64_t kConcentrationInput = 3;
inline constexpr std::uint64_t kConcentrationChannel = 4;
inline constexpr std::uint64_t kCodebook = 5;
inline constexpr std::uint64_t kMessage = 6;
inline constexpr std::uint64_t kDecoderTie = 7;
inline constexpr std::uint64_t kBlerChannel = 8;
inline constexpr std::uint64_t kSlopePoint = 9;
}  // namespace streams

inline std::mt19937_64 make_engine(std::uint64_t master, std::uint64_t stream,
                                   std::uint64_t index) {
  return std::mt19937_64(derive_seed(master, stream, index));
}

}  // namespace heatchan
