#include "doctest.h"

#include "forensica/pathfinding.hpp"
#include "forensica/rng.hpp"
#include "forensica/tile_world.hpp"

using namespace forensica;

namespace {

bool valid_path(int w, const std::vector<std::uint8_t>& open, Coord start, const std::vector<Coord>& path) {
  Coord at = start;
  for (Coord c : path) {
    if (manhattan(at, c) != 1 || !open[static_cast<std::size_t>(c.y) * w + c.x]) return false;
    at = c;
  }
  return true;
}

}  // namespace

TEST_CASE("tie-breaking is pinned on an open grid") {
  std::vector<std::uint8_t> open(9, 1);
  const auto p = find_path(3, 3, open, {0, 0}, {2, 2});
  CHECK(p == std::vector<Coord>{{0, 1}, {0, 2}, {1, 2}, {2, 2}});
}

TEST_CASE("trivial and impossible routes") {
  std::vector<std::uint8_t> open(9, 1);
  CHECK(find_path(3, 3, open, {1, 1}, {1, 1}).empty());
  open[1 * 3 + 1] = 0;
  CHECK(find_path(3, 3, open, {0, 0}, {1, 1}).empty());
  CHECK(find_path(3, 3, open, {0, 0}, {1, 1}, true).size() == 2);
  std::vector<std::uint8_t> wall{1, 0, 1, 1, 0, 1, 1, 0, 1};
  CHECK(find_path(3, 3, wall, {0, 0}, {2, 2}).empty());
}

TEST_CASE("path lengths match breadth-first distances on random mazes") {
  RandomStream s(99);
  for (int trial = 0; trial < 200; ++trial) {
    const int w = 12, h = 9;
    std::vector<std::uint8_t> open(w * h);
    for (auto& t : open) t = s.chance(0.7);
    const Coord a{static_cast<int>(s.uniform_int(0, w - 1)), static_cast<int>(s.uniform_int(0, h - 1))};
    const Coord b{static_cast<int>(s.uniform_int(0, w - 1)), static_cast<int>(s.uniform_int(0, h - 1))};
    open[a.y * w + a.x] = 1;
    open[b.y * w + b.x] = 1;
    const auto dist = bfs_distances(w, h, open, a);
    const auto p = find_path(w, h, open, a, b);
    const int d = dist[b.y * w + b.x];
    if (a == b) {
      CHECK(p.empty());
    } else if (d == kUnreached) {
      CHECK(p.empty());
    } else {
      REQUIRE(static_cast<int>(p.size()) == d);
      CHECK(p.back() == b);
      CHECK(valid_path(w, open, a, p));
      CHECK(find_path(w, h, open, a, b) == p);
    }
  }
}
