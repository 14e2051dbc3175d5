#include "sgo/random.hpp"

#include <bit>
#include <random>

#include "sgo/error.hpp"

namespace sgo {

namespace {

std::uint64_t splitmix64(std::uint64_t& state) noexcept {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t mix(std::uint64_t a, std::uint64_t b) noexcept {
  std::uint64_t st = a ^ std::rotl(b * 0xd1b54a32d192ed03ULL, 23);
  return splitmix64(st);
}

}  // namespace

RandomStream::RandomStream(std::uint64_t seed) noexcept {
  std::uint64_t st = seed;
  for (auto& word : s_) word = splitmix64(st);
}

std::uint64_t RandomStream::next() noexcept {
  const std::uint64_t result = std::rotl(s_[1] * 5, 7) * 9;
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = std::rotl(s_[3], 45);
  return result;
}

double RandomStream::uniform() noexcept {
  return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

std::size_t RandomStream::uniform_index(std::size_t lo, std::size_t hi) {
  if (lo > hi) throw Error(ErrorCode::invalid_argument, "uniform_index: empty range");
  std::uniform_int_distribution<std::size_t> dist(lo, hi);
  return dist(*this);
}

bool RandomStream::bernoulli(double p) noexcept { return uniform() < p; }

double RandomStream::gaussian() {
  std::normal_distribution<double> dist(0.0, 1.0);
  return dist(*this);
}

RandomStream RandomStream::derive(std::uint64_t child) noexcept {
  return RandomStream(mix(next(), child));
}

RandomStream RandomStream::substream(std::uint64_t seed, std::uint64_t index) noexcept {
  return RandomStream(mix(mix(seed, 0x5eed5eed5eedULL), index));
}

}  // namespace sgo
