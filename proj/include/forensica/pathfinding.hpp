#pragma once

#include <cstdint>
#include <vector>

#include "forensica/geometry.hpp"

namespace forensica {

// 4-connected A* with a Manhattan heuristic. Open-set ties are broken
// lexicographically on (f, h, x, y) so every implementation walks the same
// path. Returns the steps after `start` up to and including `goal`; empty when
// start == goal or no route exists. When `goal_always_open` is set the goal
// tile may be entered even if `passable` marks it closed.
std::vector<Coord> find_path(int width, int height, const std::vector<std::uint8_t>& passable, Coord start,
                             Coord goal, bool goal_always_open = false);

}  // namespace forensica
