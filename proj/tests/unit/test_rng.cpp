#include "doctest.h"

#include <set>
#include <vector>

#include "forensica/error.hpp"
#include "forensica/rng.hpp"

using namespace forensica;

namespace {

// Reference SplitMix64, written out from the published algorithm.
std::uint64_t ref_next(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::vector<std::uint64_t> take(RandomStream s, int n) {
  std::vector<std::uint64_t> out;
  for (int i = 0; i < n; ++i) out.push_back(s.next_u64());
  return out;
}

}  // namespace

TEST_CASE("raw stream matches reference splitmix64") {
  std::uint64_t state = 1234567;
  RandomStream s(1234567);
  for (int i = 0; i < 1000; ++i) CHECK(s.next_u64() == ref_next(state));
}

TEST_CASE("seed 1234567 known outputs") {
  const std::vector<std::uint64_t> want{6457827717110365317ULL, 3203168211198807973ULL, 9817491932198370423ULL,
                                        4593380528125082431ULL, 16408922859458223821ULL};
  CHECK(take(RandomStream(1234567), 5) == want);
}

TEST_CASE("derived streams are pinned") {
  CHECK(take(derive_stream(WorldSeed{0}, "a"), 3) ==
        std::vector<std::uint64_t>{6223453292557176174ULL, 14944861241755564683ULL, 228521819479128242ULL});
  CHECK(take(derive_stream(WorldSeed{0}, "b"), 3) ==
        std::vector<std::uint64_t>{8669512084397147627ULL, 13981370715484677290ULL, 887615797697644443ULL});
  CHECK(take(derive_stream(WorldSeed{1}, "a"), 3) ==
        std::vector<std::uint64_t>{2173342480884055955ULL, 10538035271518152597ULL, 13701008683786464126ULL});
  CHECK(take(derive_stream(WorldSeed{42}, "village.sim"), 3) ==
        std::vector<std::uint64_t>{18170447692938860070ULL, 4397464999493433004ULL, 17321591695291775320ULL});
}

TEST_CASE("labels are validated") {
  CHECK_THROWS_AS(derive_stream(WorldSeed{1}, ""), Error);
  CHECK_THROWS_AS(derive_stream(WorldSeed{1}, std::string(65, 'x')), Error);
  CHECK_NOTHROW(derive_stream(WorldSeed{1}, std::string(64, 'x')));
}

TEST_CASE("sibling labels do not collide") {
  std::set<std::uint64_t> firsts;
  for (int i = 0; i < 200; ++i) firsts.insert(derive_stream(WorldSeed{9}, "stage#" + std::to_string(i)).next_u64());
  CHECK(firsts.size() == 200);
}

TEST_CASE("uniform_int stays in range and hits both ends") {
  RandomStream s(5);
  bool lo = false, hi = false;
  for (int i = 0; i < 5000; ++i) {
    const auto v = s.uniform_int(-3, 4);
    REQUIRE(v >= -3);
    REQUIRE(v <= 4);
    lo |= v == -3;
    hi |= v == 4;
  }
  CHECK(lo);
  CHECK(hi);
  CHECK(s.uniform_int(7, 7) == 7);
}

TEST_CASE("chance always consumes one output") {
  RandomStream a(77), b(77);
  a.chance(0.0);
  a.chance(1.0);
  a.chance(0.5);
  b.next_u64();
  b.next_u64();
  b.next_u64();
  CHECK(a.state() == b.state());
}

TEST_CASE("uniform01 in [0,1)") {
  RandomStream s(3);
  for (int i = 0; i < 10000; ++i) {
    const double d = s.uniform01();
    REQUIRE(d >= 0.0);
    REQUIRE(d < 1.0);
  }
}

TEST_CASE("shuffle is a permutation") {
  RandomStream s(11);
  std::vector<int> v{1, 2, 3, 4, 5, 6, 7, 8};
  s.shuffle(std::span<int>(v));
  std::multiset<int> m(v.begin(), v.end());
  CHECK(m == std::multiset<int>{1, 2, 3, 4, 5, 6, 7, 8});
}

TEST_CASE("parse_seed") {
  CHECK(parse_seed("42").value == 42);
  CHECK(parse_seed("0x2a").value == 42);
  CHECK(parse_seed("18446744073709551615").value == 18446744073709551615ULL);
  CHECK_THROWS_AS(parse_seed("-1"), Error);
  CHECK_THROWS_AS(parse_seed("12a"), Error);
  CHECK_THROWS_AS(parse_seed(""), Error);
  CHECK_THROWS_AS(parse_seed("18446744073709551616"), Error);
}
