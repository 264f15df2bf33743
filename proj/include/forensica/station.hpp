#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "forensica/config.hpp"
#include "forensica/content.hpp"
#include "forensica/rng.hpp"
#include "forensica/scenery.hpp"
#include "forensica/tile_world.hpp"

namespace forensica {

enum class Profession { SecurityOfficer, LogisticsOfficer, Scientist };

std::string_view profession_name(Profession p);
std::optional<Profession> profession_from_name(std::string_view name);

struct Room {
  Rect rect;  // outer rectangle, walls included
  RoomKind kind = RoomKind::SecondaryLab;
  std::vector<Coord> doorways;
  std::vector<std::string> scenery;  // object ids in grid.objects
  std::string label;                 // "the mess hall", "lab 2", ...
  Rect interior() const { return rect.inflated(-1); }
  friend bool operator==(const Room&, const Room&) = default;
};

struct Station {
  TileWorld grid;
  std::vector<Room> rooms;
  std::vector<Rect> corridors;  // floor rectangles, 3 tiles wide
  Coord entrance_door;
  friend bool operator==(const Station&, const Station&) = default;
};

struct CrewMember {
  int id = 0;
  std::string name;
  Profession profession = Profession::Scientist;
  Coord start_position;
  std::string description;
  friend bool operator==(const CrewMember&, const CrewMember&) = default;
};

struct AnomalySpawn {
  Coord position;
  friend bool operator==(const AnomalySpawn&, const AnomalySpawn&) = default;
};

struct StationBuild {
  Station station;
  std::vector<CrewMember> crew;
  AnomalySpawn anomaly;
  friend bool operator==(const StationBuild&, const StationBuild&) = default;
};

inline constexpr int kCorridorWidth = 3;
inline constexpr int kCorridorArea = -2;
inline constexpr int kOutsideArea = -3;
inline constexpr int kNoArea = -1;

// Room index for room interiors and room doorways, kCorridorArea for corridor
// floor, kOutsideArea for the snowfield, kNoArea for walls.
std::vector<int> area_map(const Station& station);

std::optional<std::size_t> room_index_at(const Station& station, Coord c);
std::size_t room_index_of_kind(const Station& station, RoomKind kind);
// Human-readable place name used in radio messages.
std::string location_name(const Station& station, Coord c);

// Interior tiles orthogonally next to a doorway of this room.
std::vector<Coord> doorway_fronts(const Room& room);

// Layout only: corridors, rooms, doorways, room kinds, entrance door.
// Throws Error(GenerationFailed) when the layout cannot be completed.
Station build_layout(RandomStream& stream, const StationConfig& config);

// Places whitelisted patterns with a one-tile margin. Returns placed count.
int place_scenery(Station& station, std::size_t room_index, const std::vector<SceneryPattern>& patterns,
                  RandomStream& stream, const StationConfig& config);

// Every passable tile inside the station is reachable from the entrance door.
std::optional<std::string> walkability_problem(const Station& station);
// All Station invariants. Empty when fine.
std::optional<std::string> station_problem(const Station& station);

StationBuild build_station(WorldSeed seed, const GenConfig& config, const Content& content = default_content());

}  // namespace forensica
