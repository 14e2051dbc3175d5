#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <limits>

namespace sgo {

/// Seedable pseudo-random source (xoshiro256** seeded through SplitMix64).
///
/// A stream is single-owner. Independent randomness for sub-computations is
/// obtained with `derive(i)`, which consumes one draw from this stream and
/// mixes it with the child index, so repeated derivations from a live stream
/// never repeat. `substream(seed, i)` is the pure counterpart used to give
/// every Monte Carlo run its own stream regardless of scheduling order.
class RandomStream {
 public:
  using result_type = std::uint64_t;

  explicit RandomStream(std::uint64_t seed = 0) noexcept;

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  result_type operator()() noexcept { return next(); }
  std::uint64_t next() noexcept;

  /// Uniform real in [0, 1) with 53 random bits.
  double uniform() noexcept;
  /// Uniform integer in the closed range [lo, hi].
  std::size_t uniform_index(std::size_t lo, std::size_t hi);
  bool bernoulli(double p) noexcept;
  double gaussian();

  RandomStream derive(std::uint64_t child) noexcept;
  static RandomStream substream(std::uint64_t seed, std::uint64_t index) noexcept;

 private:
  std::array<std::uint64_t, 4> s_{};
};

}  // namespace sgo
