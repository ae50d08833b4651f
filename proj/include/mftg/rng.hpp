#pragma once

#include <cmath>
#include <cstdint>
#include <array>

namespace mftg {

// Philox4x32-10 counter-based generator (Salmon et al., SC'11).
//
// Every random draw in this project comes from a stream identified by
// (seed, stream id); the stream id encodes what the draw is for (rollout r of
// outer iteration i, noise of team j at step k, ...). Results are therefore
// bit-identical for a given seed no matter how work is scheduled across
// threads.
class Philox {
 public:
  Philox(std::uint64_t seed, std::uint64_t stream)
      : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
        ctr_{0, 0, static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)} {}

  // One 128-bit block; advances the draw counter.
  std::array<std::uint32_t, 4> next_block() {
    std::array<std::uint32_t, 4> out = ctr_;
    std::uint32_t k0 = key_[0], k1 = key_[1];
    for (int round = 0; round < 10; ++round) {
      out = single_round(out, k0, k1);
      k0 += kWeyl0;
      k1 += kWeyl1;
    }
    if (++ctr_[0] == 0) ++ctr_[1];
    return out;
  }

  std::uint64_t next_u64() {
    const auto b = next_block();
    return (static_cast<std::uint64_t>(b[1]) << 32) | b[0];
  }

  // 53-bit uniform in [0, 1).
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform in (0, 1); safe under log().
  double uniform_open() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  // Standard normal via Box-Muller (one block per call, cosine branch).
  double gaussian() {
    const auto b = next_block();
    const double u1 =
        (static_cast<double>((static_cast<std::uint64_t>(b[1]) << 32 | b[0]) >> 11) + 0.5) *
        0x1.0p-53;
    const double u2 =
        static_cast<double>((static_cast<std::uint64_t>(b[3]) << 32 | b[2]) >> 11) * 0x1.0p-53;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
  }

  static std::array<std::uint32_t, 4> single_round(std::array<std::uint32_t, 4> x,
                                                   std::uint32_t k0, std::uint32_t k1) {
    const std::uint64_t p0 = static_cast<std::uint64_t>(kMul0) * x[0];
    const std::uint64_t p1 = static_cast<std::uint64_t>(kMul1) * x[2];
    const auto lo0 = static_cast<std::uint32_t>(p0), hi0 = static_cast<std::uint32_t>(p0 >> 32);
    const auto lo1 = static_cast<std::uint32_t>(p1), hi1 = static_cast<std::uint32_t>(p1 >> 32);
    return {hi1 ^ x[1] ^ k0, lo1, hi0 ^ x[3] ^ k1, lo0};
  }

  // Raw block function on explicit counter/key, for known-answer tests.
  static std::array<std::uint32_t, 4> block(std::array<std::uint32_t, 4> ctr,
                                            std::array<std::uint32_t, 2> key) {
    for (int round = 0; round < 10; ++round) {
      ctr = single_round(ctr, key[0], key[1]);
      key[0] += kWeyl0;
      key[1] += kWeyl1;
    }
    return ctr;
  }

 private:
  static constexpr std::uint32_t kMul0 = 0xD2511F53;
  static constexpr std::uint32_t kMul1 = 0xCD9E8D57;
  static constexpr std::uint32_t kWeyl0 = 0x9E3779B9;
  static constexpr std::uint32_t kWeyl1 = 0xBB67AE85;
  static constexpr double kPi = 3.14159265358979323846;

  std::array<std::uint32_t, 2> key_;
  std::array<std::uint32_t, 4> ctr_;
};

// Stream-id layout: tag(8) | a(20) | b(20) | c(16).
// a, b index rollouts/teams/runs (< 2^20), c indexes time steps or outer
// iterations (< 2^16).
enum class StreamTag : std::uint8_t {
  kInitState = 1,
  kProcessNoise = 2,
  kActionUniform = 3,
  kFitRollout = 4,
  kFitExplore = 5,
  kOpRollout = 6,
  kPopulation = 7,
  kProbe = 8,
};

inline std::uint64_t stream_id(StreamTag tag, std::uint64_t a, std::uint64_t b = 0,
                               std::uint64_t c = 0) {
  return (static_cast<std::uint64_t>(tag) << 56) | ((a & 0xFFFFF) << 36) |
         ((b & 0xFFFFF) << 16) | (c & 0xFFFF);
}

inline Philox make_rng(std::uint64_t seed, StreamTag tag, std::uint64_t a, std::uint64_t b = 0,
                       std::uint64_t c = 0) {
  return Philox(seed, stream_id(tag, a, b, c));
}

// SplitMix64 finalizer; used to derive per-point seeds in sweeps.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (salt + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

}  // namespace mftg
