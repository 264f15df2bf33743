#include "forensica/tile_world.hpp"

#include <array>
#include <deque>

namespace forensica {

namespace {

struct TileInfo {
  TileKind kind;
  char code;
  std::string_view name;
  bool passable;
};

constexpr std::array<TileInfo, 10> kTiles{{
    {TileKind::Ground, '.', "ground", true},
    {TileKind::Road, '=', "road", true},
    {TileKind::Water, '~', "water", false},
    {TileKind::Floor, '_', "floor", true},
    {TileKind::Wall, '#', "wall", false},
    {TileKind::Fence, '|', "fence", false},
    {TileKind::Rubble, ',', "rubble", true},
    {TileKind::Door, '+', "door", true},
    {TileKind::Soil, ':', "soil", true},
    {TileKind::Exterior, '*', "exterior", true},
}};

constexpr std::array<std::string_view, 27> kObjectNames{
    "pew",       "altar",           "engraving",         "statue-fragment", "plaque",
    "table",     "chair",           "cutlery",           "toy",             "crop",
    "weed",      "cattle-skeleton", "predator-skeleton", "perfume",         "hay",
    "bed",       "desk",            "locker",            "lab-bench",       "console",
    "crate",     "fuel-barrel",     "weapon-rack",       "specimen-tank",   "terminal",
    "body",      "debris",
};

}  // namespace

char tile_code(TileKind kind) { return kTiles[static_cast<std::size_t>(kind)].code; }

std::optional<TileKind> tile_from_code(char code) {
  for (const auto& t : kTiles) {
    if (t.code == code) return t.kind;
  }
  return std::nullopt;
}

std::string_view tile_name(TileKind kind) { return kTiles[static_cast<std::size_t>(kind)].name; }

bool tile_passable(TileKind kind) { return kTiles[static_cast<std::size_t>(kind)].passable; }

std::string_view object_name(ObjectKind kind) {
  return kObjectNames[static_cast<std::size_t>(kind)];
}

std::optional<ObjectKind> object_from_name(std::string_view name) {
  for (std::size_t i = 0; i < kObjectNames.size(); ++i) {
    if (kObjectNames[i] == name) return static_cast<ObjectKind>(i);
  }
  return std::nullopt;
}

TileWorld::TileWorld(int w, int h, TileKind fill)
    : width(w), height(h), tiles(static_cast<std::size_t>(w) * h, TileCell{fill, false}) {}

std::vector<std::uint8_t> TileWorld::blocking_mask() const {
  std::vector<std::uint8_t> mask(tiles.size(), 0);
  for (const auto& o : objects) {
    if (o.blocking && in_bounds(o.position)) mask[index(o.position)] = 1;
  }
  return mask;
}

std::vector<std::uint8_t> TileWorld::passable_mask() const {
  std::vector<std::uint8_t> mask(tiles.size(), 0);
  for (std::size_t i = 0; i < tiles.size(); ++i) mask[i] = tile_passable(tiles[i].kind) ? 1 : 0;
  for (const auto& o : objects) {
    if (o.blocking && in_bounds(o.position)) mask[index(o.position)] = 0;
  }
  return mask;
}

const PlacedObject* TileWorld::object_at(Coord c) const {
  const PlacedObject* found = nullptr;
  for (const auto& o : objects) {
    if (o.position == c) {
      if (o.blocking) return &o;
      if (!found) found = &o;
    }
  }
  return found;
}

std::vector<const PlacedObject*> TileWorld::objects_at(Coord c) const {
  std::vector<const PlacedObject*> out;
  for (const auto& o : objects) {
    if (o.position == c) out.push_back(&o);
  }
  return out;
}

const PlacedObject* TileWorld::find_object(std::string_view id) const {
  for (const auto& o : objects) {
    if (o.id == id) return &o;
  }
  return nullptr;
}

std::vector<int> bfs_distances(int width, int height, const std::vector<std::uint8_t>& passable,
                               Coord start) {
  std::vector<int> dist(static_cast<std::size_t>(width) * height, kUnreached);
  auto idx = [width](Coord c) { return static_cast<std::size_t>(c.y) * width + c.x; };
  if (start.x < 0 || start.y < 0 || start.x >= width || start.y >= height) return dist;
  if (!passable[idx(start)]) return dist;
  std::deque<Coord> queue{start};
  dist[idx(start)] = 0;
  while (!queue.empty()) {
    const Coord c = queue.front();
    queue.pop_front();
    for (Coord d : kOrthogonal) {
      const Coord n = c + d;
      if (n.x < 0 || n.y < 0 || n.x >= width || n.y >= height) continue;
      const auto i = idx(n);
      if (!passable[i] || dist[i] != kUnreached) continue;
      dist[i] = dist[idx(c)] + 1;
      queue.push_back(n);
    }
  }
  return dist;
}

}  // namespace forensica
