#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "forensica/geometry.hpp"

namespace forensica {

enum class TileKind : std::uint8_t {
  Ground,    // open sand around the ruined village
  Road,
  Water,
  Floor,
  Wall,
  Fence,
  Rubble,    // broken wall or fence, passable
  Door,
  Soil,      // tilled field ground
  Exterior,  // the snowfield outside the station
};

char tile_code(TileKind kind);
std::optional<TileKind> tile_from_code(char code);
std::string_view tile_name(TileKind kind);
bool tile_passable(TileKind kind);

enum class ObjectKind : std::uint8_t {
  Pew,
  Altar,
  Engraving,
  StatueFragment,
  Plaque,
  Table,
  Chair,
  Cutlery,
  Toy,
  Crop,
  Weed,
  CattleSkeleton,
  PredatorSkeleton,
  Perfume,
  Hay,
  Bed,
  Desk,
  Locker,
  LabBench,
  Console,
  Crate,
  FuelBarrel,
  WeaponRack,
  SpecimenTank,
  Terminal,
  Body,
  Debris,
};

std::string_view object_name(ObjectKind kind);
std::optional<ObjectKind> object_from_name(std::string_view name);

struct PlacedObject {
  std::string id;
  Coord position;
  ObjectKind kind = ObjectKind::Debris;
  std::string description_key;  // grammar symbol the description came from
  std::string description;
  bool blocking = false;
  std::map<std::string, std::int64_t> attributes;

  friend bool operator==(const PlacedObject&, const PlacedObject&) = default;
};

struct TileCell {
  TileKind kind = TileKind::Ground;
  bool scorched = false;

  friend bool operator==(const TileCell&, const TileCell&) = default;
};

// Shared rendered output of both games.
struct TileWorld {
  int width = 0;
  int height = 0;
  std::vector<TileCell> tiles;
  std::vector<PlacedObject> objects;
  Coord spawn;
  // Feature reserved per 10x10 region (village only; empty string = free).
  std::vector<std::string> regions;
  // World-level text for plain tiles, already rendered.
  std::map<std::string, std::string> tile_descriptions;

  friend bool operator==(const TileWorld&, const TileWorld&) = default;

  TileWorld() = default;
  TileWorld(int w, int h, TileKind fill);

  bool in_bounds(Coord c) const { return c.x >= 0 && c.y >= 0 && c.x < width && c.y < height; }
  std::size_t index(Coord c) const { return static_cast<std::size_t>(c.y) * width + c.x; }
  TileCell& at(Coord c) { return tiles[index(c)]; }
  const TileCell& at(Coord c) const { return tiles[index(c)]; }

  // Per-tile flag: a blocking object stands here.
  std::vector<std::uint8_t> blocking_mask() const;
  std::vector<std::uint8_t> passable_mask() const;

  const PlacedObject* object_at(Coord c) const;
  std::vector<const PlacedObject*> objects_at(Coord c) const;
  const PlacedObject* find_object(std::string_view id) const;
};

inline constexpr int kUnreached = -1;

// 4-connected BFS distances over `passable` (one byte per tile) from `start`.
std::vector<int> bfs_distances(int width, int height, const std::vector<std::uint8_t>& passable,
                               Coord start);

}  // namespace forensica
