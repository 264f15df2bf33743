#include "forensica/pathfinding.hpp"

#include <algorithm>
#include <queue>
#include <tuple>

namespace forensica {

std::vector<Coord> find_path(int width, int height, const std::vector<std::uint8_t>& passable, Coord start,
                             Coord goal, bool goal_always_open) {
  if (start == goal) return {};
  auto inside = [&](Coord c) { return c.x >= 0 && c.y >= 0 && c.x < width && c.y < height; };
  if (!inside(start) || !inside(goal)) return {};
  auto idx = [width](Coord c) { return static_cast<std::size_t>(c.y) * width + c.x; };
  if (!goal_always_open && !passable[idx(goal)]) return {};

  const std::size_t n = static_cast<std::size_t>(width) * height;
  std::vector<int> g(n, -1);
  std::vector<int> parent(n, -1);
  std::vector<std::uint8_t> closed(n, 0);
  using Key = std::tuple<int, int, int, int>;  // f, h, x, y
  std::priority_queue<Key, std::vector<Key>, std::greater<Key>> open;

  g[idx(start)] = 0;
  const int h0 = manhattan(start, goal);
  open.emplace(h0, h0, start.x, start.y);
  while (!open.empty()) {
    const auto [f, h, x, y] = open.top();
    open.pop();
    const Coord c{x, y};
    const std::size_t ci = idx(c);
    if (closed[ci]) continue;
    closed[ci] = 1;
    if (c == goal) break;
    for (Coord d : kOrthogonal) {
      const Coord nb = c + d;
      if (!inside(nb)) continue;
      const std::size_t ni = idx(nb);
      if (closed[ni]) continue;
      if (!passable[ni] && !(goal_always_open && nb == goal)) continue;
      const int ng = g[ci] + 1;
      if (g[ni] != -1 && g[ni] <= ng) continue;
      g[ni] = ng;
      parent[ni] = static_cast<int>(ci);
      const int nh = manhattan(nb, goal);
      open.emplace(ng + nh, nh, nb.x, nb.y);
    }
  }
  if (!closed[idx(goal)]) return {};
  std::vector<Coord> path;
  for (int at = static_cast<int>(idx(goal)); at != static_cast<int>(idx(start)); at = parent[static_cast<std::size_t>(at)]) {
    path.push_back({at % width, at / width});
  }
  std::reverse(path.begin(), path.end());
  return path;
}

}  // namespace forensica
