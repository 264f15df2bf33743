#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>

namespace forensica {

struct WorldSeed {
  std::uint64_t value = 0;

  friend bool operator==(WorldSeed, WorldSeed) = default;
};

// Accepts decimal ("42") or hexadecimal ("0x2a"). Throws Error(InvalidConfig).
WorldSeed parse_seed(std::string_view text);

std::uint64_t fnv1a64(std::string_view bytes);

// SplitMix64 stream. The algorithm, the label mixing and the draw
// primitives are part of the world format; see docs/rng.md before changing
// anything here.
//
// Every draw primitive consumes a fixed number of 64-bit outputs except
// uniform_int, which rejection-samples (the rejection loop is documented).
class RandomStream {
 public:
  static constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

  // Raw constructor: the first output is mix(state + kGolden).
  explicit RandomStream(std::uint64_t state) : state_(state) {}

  std::uint64_t next_u64();

  // Uniform integer in [lo, hi] (inclusive). lo > hi is a programming error
  // and returns lo without consuming.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);

  // 53-bit double in [0, 1).
  double uniform01();
  double uniform_real(double lo, double hi);

  // Always consumes exactly one output, including for p <= 0 and p >= 1.
  bool chance(double p);

  std::size_t index(std::size_t size) {
    return static_cast<std::size_t>(uniform_int(0, static_cast<std::int64_t>(size) - 1));
  }

  template <typename T>
  void shuffle(std::span<T> items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      const std::size_t j = static_cast<std::size_t>(uniform_int(0, static_cast<std::int64_t>(i - 1)));
      std::swap(items[i - 1], items[j]);
    }
  }

  std::uint64_t state() const noexcept { return state_; }

 private:
  std::uint64_t state_;
};

std::uint64_t splitmix64_mix(std::uint64_t z);

// Independent stream for one generation stage. Label must be 1..64 bytes.
RandomStream derive_stream(WorldSeed seed, std::string_view label);

}  // namespace forensica
