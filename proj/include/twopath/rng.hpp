/**
 * rng.hpp — seeded, reproducible random streams.
 *
 * Generator: xoshiro256** (Blackman & Vigna, 2018). The 256-bit state is
 * filled from SplitMix64 seeded with a mix of (seed, stream_id), so every
 * (seed, stream_id) pair yields the same sequence on every platform.
 * Conversions to real numbers are done here rather than through the
 * implementation-defined <random> distributions.
 */

#pragma once

#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>

namespace twopath {

[[nodiscard]] constexpr std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

class RngStream {
 public:
  using result_type = std::uint64_t;

  RngStream(std::uint64_t seed, std::uint64_t stream_id) : seed_(seed), stream_id_(stream_id) {
    std::uint64_t sm = seed;
    std::uint64_t mixed = splitmix64(sm);
    std::uint64_t sid = stream_id ^ 0x6A09E667F3BCC909ULL;
    mixed ^= splitmix64(sid);
    for (auto& word : state_) word = splitmix64(mixed);
  }

  [[nodiscard]] std::uint64_t seed() const { return seed_; }
  [[nodiscard]] std::uint64_t stream_id() const { return stream_id_; }

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() {
    const std::uint64_t result = std::rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = std::rotl(state_[3], 45);
    return result;
  }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Standard normal by Box-Muller; one variate per call.
  double normal() {
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  bool bernoulli(double p) { return uniform() < p; }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::array<std::uint64_t, 4> state_{};
};

}  // namespace twopath
