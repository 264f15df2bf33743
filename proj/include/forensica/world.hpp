#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "forensica/config.hpp"
#include "forensica/content.hpp"
#include "forensica/evidence.hpp"
#include "forensica/rng.hpp"
#include "forensica/station.hpp"
#include "forensica/station_sim.hpp"
#include "forensica/tile_world.hpp"
#include "forensica/village_render.hpp"
#include "forensica/village_sim.hpp"

namespace forensica {

enum class GameKind { Village, Station };
std::string_view game_kind_name(GameKind g);
std::optional<GameKind> game_kind_from_name(std::string_view name);

struct VillageTruth {
  EndingKind ending = EndingKind::Famine;
  int tick_count = 0;
  double final_temperature = 0.0;
  double final_fauna = 0.0;
  double final_eco_health = 0.0;
  int final_population = 0;
  double final_food = 0.0;
  CultureProfile culture;
  int total_births = 0;
  friend bool operator==(const VillageTruth&, const VillageTruth&) = default;
};

struct BodyTruth {
  std::string body_id;
  int crew_id = 0;
  std::string name;
  Profession profession = Profession::Scientist;
  FateRecord fate;
  friend bool operator==(const BodyTruth&, const BodyTruth&) = default;
};

struct StationTruth {
  std::vector<BodyTruth> bodies;  // ordered by body id
  int sim_turns = 0;
  int climax_turn = -1;
  int start_minute = 0;
  friend bool operator==(const StationTruth&, const StationTruth&) = default;
};

// The sealed section: everything the player is meant to work out.
struct GroundTruth {
  std::optional<VillageTruth> village;
  std::optional<StationTruth> station;
  friend bool operator==(const GroundTruth&, const GroundTruth&) = default;
};

inline constexpr int kFormatVersion = 1;

struct WorldBundle {
  int format_version = kFormatVersion;
  WorldSeed seed;
  std::string config_digest;
  GameKind game = GameKind::Village;
  TileWorld world;
  // Village layout.
  std::vector<BuildingFootprint> buildings;
  // Station layout and evidence.
  std::vector<Room> rooms;
  std::vector<Rect> corridors;
  std::optional<Coord> entrance_door;
  std::vector<Terminal> terminals;
  std::optional<GroundTruth> ground_truth;
  friend bool operator==(const WorldBundle&, const WorldBundle&) = default;

  // Station view of the layout (grid copied).
  Station station() const;
};

WorldBundle generate_village_bundle(WorldSeed seed, const GenConfig& config, const Content& content = default_content());
WorldBundle generate_station_bundle(WorldSeed seed, const GenConfig& config, const Content& content = default_content());
WorldBundle generate_world(GameKind game, WorldSeed seed, const GenConfig& config,
                           const Content& content = default_content());

// Intermediate products, exposed for tests and the trace command.
struct StationRun {
  StationBuild build;
  SimState sim;
  WorldBundle bundle;
};
StationRun run_station_pipeline(WorldSeed seed, const GenConfig& config, const Content& content = default_content());

VillageTruth village_truth(const VillageHistory& history);

// Body description: how they died plus what they wore. Never names.
std::string body_description(FateCause cause, Profession profession, const Grammar& grammar, RandomStream& stream);

}  // namespace forensica
