#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>

// Counter-based random number generation (philox4x32-10, Salmon et al.,
// "Parallel random numbers: as easy as 1, 2, 3", SC'11).
//
// Every random quantity in this library is a pure function of
// (seed, role, substream, position), so Monte Carlo results do not depend
// on evaluation order or worker count. A stream is addressed by a 64-bit
// seed (the philox key), a role byte and a 56-bit substream index packed
// into the upper counter words; the lower 64 counter bits enumerate blocks
// within the stream.

namespace setidet {

// Disjoint counter subspaces for the different consumers of randomness.
// Streams with different roles never collide even when they share a seed.
enum class StreamRole : std::uint32_t {
  kNoise = 1,
  kTrialParams = 2,
  kSymbols = 3,
};

namespace detail {

struct Philox4x32 {
  static constexpr std::uint32_t kMul0 = 0xD2511F53u;
  static constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
  static constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
  static constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

  static std::array<std::uint32_t, 4> block(std::array<std::uint32_t, 4> ctr,
                                            std::array<std::uint32_t, 2> key) {
    for (int round = 0; round < 10; ++round) {
      const std::uint64_t p0 = std::uint64_t(kMul0) * ctr[0];
      const std::uint64_t p1 = std::uint64_t(kMul1) * ctr[2];
      ctr = {std::uint32_t(p1 >> 32) ^ ctr[1] ^ key[0], std::uint32_t(p1),
             std::uint32_t(p0 >> 32) ^ ctr[3] ^ key[1], std::uint32_t(p0)};
      key[0] += kWeyl0;
      key[1] += kWeyl1;
    }
    return ctr;
  }
};

// splitmix64 output mixer; used to derive child seeds from a master seed.
inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

}  // namespace detail

// Child-seed derivation: deterministic, well-mixed, and stable across
// platforms. Tags separate unrelated consumers; the index enumerates
// trials/cells under one tag.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t tag,
                                 std::uint64_t index = 0) {
  constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;
  std::uint64_t h = detail::mix64(base + kGolden * (tag + 1));
  return detail::mix64(h + kGolden * (index + 1));
}

class RandomStream {
 public:
  RandomStream(std::uint64_t seed, StreamRole role, std::uint64_t substream = 0)
      : key_{std::uint32_t(seed), std::uint32_t(seed >> 32)},
        hi_{std::uint32_t(substream),
            (std::uint32_t(substream >> 32) << 8) | (std::uint32_t(role) & 0xFFu)} {}

  // 64-bit draws come out of 128-bit philox blocks two at a time.
  std::uint64_t next_u64() {
    if (have_) {
      have_ = false;
      return spare_;
    }
    const auto out = detail::Philox4x32::block(
        {std::uint32_t(block_), std::uint32_t(block_ >> 32), hi_[0], hi_[1]}, key_);
    ++block_;
    spare_ = std::uint64_t(out[2]) | (std::uint64_t(out[3]) << 32);
    have_ = true;
    return std::uint64_t(out[0]) | (std::uint64_t(out[1]) << 32);
  }

  // Uniform on [0, 1) with 53 random bits.
  double uniform01() { return double(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform on (0, 1]; safe as a log() argument.
  double uniform_open01() { return double((next_u64() >> 11) + 1) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // Equiprobable +/-1.
  int sign() { return (next_u64() >> 63) ? 1 : -1; }

  // One circular complex Gaussian sample with E|z|^2 = variance
  // (real and imaginary parts each N(0, variance/2)), via Box-Muller.
  std::complex<double> next_cgauss(double variance) {
    const double u1 = uniform_open01();
    const double u2 = uniform01();
    const double r = std::sqrt(-variance * std::log(u1));
    const double th = 2.0 * std::numbers::pi * u2;
    return {r * std::cos(th), r * std::sin(th)};
  }

 private:
  std::array<std::uint32_t, 2> key_;
  std::array<std::uint32_t, 2> hi_;
  std::uint64_t block_ = 0;
  std::uint64_t spare_ = 0;
  bool have_ = false;
};

}  // namespace setidet
