#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "forensica/geometry.hpp"
#include "forensica/tile_world.hpp"

namespace forensica {

enum class RoomKind { Entrance, MessHall, Residences, Lab1, SecurityOffice, SecondaryLab };

std::string_view room_kind_name(RoomKind kind);
std::optional<RoomKind> room_kind_from_name(std::string_view name);

struct SceneryPiece {
  Coord offset;
  ObjectKind kind = ObjectKind::Crate;
  friend bool operator==(const SceneryPiece&, const SceneryPiece&) = default;
};

// Authored in the "wall to the north" frame: when against_wall is set, every
// piece in the pattern's top row (minimum dy) touches the wall. Placement tries
// all four rotations.
struct SceneryPattern {
  std::string name;
  std::vector<SceneryPiece> pieces;
  bool against_wall = false;
  std::vector<RoomKind> rooms;  // whitelist

  bool allowed_in(RoomKind kind) const;
  friend bool operator==(const SceneryPattern&, const SceneryPattern&) = default;
};

// Rotates the pattern clockwise by quarter turns (0..3).
std::vector<SceneryPiece> rotate_pieces(const std::vector<SceneryPiece>& pieces, int quarter_turns);

bool object_blocks_by_default(ObjectKind kind);

}  // namespace forensica
