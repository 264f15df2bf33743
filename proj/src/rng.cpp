#include "forensica/rng.hpp"

#include <charconv>
#include <limits>

#include "forensica/error.hpp"

namespace forensica {

WorldSeed parse_seed(std::string_view text) {
  int base = 10;
  std::string_view digits = text;
  if (digits.size() > 2 && digits[0] == '0' && (digits[1] == 'x' || digits[1] == 'X')) {
    base = 16;
    digits.remove_prefix(2);
  }
  std::uint64_t value = 0;
  const auto* first = digits.data();
  const auto* last = digits.data() + digits.size();
  auto [ptr, ec] = std::from_chars(first, last, value, base);
  if (digits.empty() || ec != std::errc{} || ptr != last) {
    throw Error(ErrorKind::InvalidConfig, "seed: expected decimal or 0x-hex 64-bit integer, got '" +
                                              std::string(text) + "'");
  }
  return WorldSeed{value};
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t splitmix64_mix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t RandomStream::next_u64() {
  state_ += kGolden;
  return splitmix64_mix(state_);
}

std::int64_t RandomStream::uniform_int(std::int64_t lo, std::int64_t hi) {
  if (lo >= hi) return lo;
  const std::uint64_t span = static_cast<std::uint64_t>(hi) - static_cast<std::uint64_t>(lo) + 1;
  if (span == 0) {
    return static_cast<std::int64_t>(next_u64());
  }
  // Reject the low (2^64 mod span) outputs so the modulo is unbiased.
  const std::uint64_t threshold = (0 - span) % span;
  for (;;) {
    const std::uint64_t r = next_u64();
    if (r >= threshold) {
      return static_cast<std::int64_t>(static_cast<std::uint64_t>(lo) + r % span);
    }
  }
}

double RandomStream::uniform01() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RandomStream::uniform_real(double lo, double hi) {
  return lo + (hi - lo) * uniform01();
}

bool RandomStream::chance(double p) {
  return uniform01() < p;
}

RandomStream derive_stream(WorldSeed seed, std::string_view label) {
  if (label.empty() || label.size() > 64) {
    throw Error(ErrorKind::InvalidLabel,
                "stream label must be 1..64 bytes, got " + std::to_string(label.size()));
  }
  const std::uint64_t base = splitmix64_mix(seed.value + RandomStream::kGolden);
  return RandomStream(base ^ fnv1a64(label));
}

}  // namespace forensica
