#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <cstdlib>

namespace forensica {

// Grid coordinate. y grows southward.
struct Coord {
  int x = 0;
  int y = 0;

  friend bool operator==(Coord, Coord) = default;
  friend auto operator<=>(Coord, Coord) = default;
  Coord operator+(Coord o) const { return {x + o.x, y + o.y}; }
  Coord operator-(Coord o) const { return {x - o.x, y - o.y}; }
};

inline int manhattan(Coord a, Coord b) { return std::abs(a.x - b.x) + std::abs(a.y - b.y); }
inline int chebyshev(Coord a, Coord b) {
  const int dx = std::abs(a.x - b.x);
  const int dy = std::abs(a.y - b.y);
  return dx > dy ? dx : dy;
}
inline int dist2(Coord a, Coord b) {
  const int dx = a.x - b.x;
  const int dy = a.y - b.y;
  return dx * dx + dy * dy;
}

inline constexpr std::array<Coord, 4> kOrthogonal{{{0, -1}, {1, 0}, {0, 1}, {-1, 0}}};
inline constexpr std::array<Coord, 8> kNeighbours8{
    {{0, -1}, {1, -1}, {1, 0}, {1, 1}, {0, 1}, {-1, 1}, {-1, 0}, {-1, -1}}};

struct Rect {
  int x = 0;
  int y = 0;
  int w = 0;
  int h = 0;

  friend bool operator==(const Rect&, const Rect&) = default;

  int right() const { return x + w; }   // exclusive
  int bottom() const { return y + h; }  // exclusive
  bool contains(Coord c) const { return c.x >= x && c.x < x + w && c.y >= y && c.y < y + h; }
  bool intersects(const Rect& o) const {
    return x < o.right() && o.x < right() && y < o.bottom() && o.y < bottom();
  }
  Rect inflated(int by) const { return {x - by, y - by, w + 2 * by, h + 2 * by}; }
  Coord center() const { return {x + w / 2, y + h / 2}; }
  bool on_border(Coord c) const {
    return contains(c) && (c.x == x || c.y == y || c.x == right() - 1 || c.y == bottom() - 1);
  }
};

}  // namespace forensica
