#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "forensica/config.hpp"
#include "forensica/content.hpp"
#include "forensica/grammar.hpp"
#include "forensica/rng.hpp"
#include "forensica/tile_world.hpp"
#include "forensica/village_sim.hpp"

namespace forensica {

inline constexpr int kVillageSize = 100;
inline constexpr int kRegionSize = 10;
inline constexpr int kHallWidth = 20;
inline constexpr int kHallHeight = 10;

enum class BuildingKind { House, Barn, Field, WorshipHall, Statue };

std::string_view building_kind_name(BuildingKind kind);
std::optional<BuildingKind> building_kind_from_name(std::string_view name);

struct BuildingFootprint {
  BuildingKind kind = BuildingKind::House;
  Rect rect;
  Coord door;  // unused for the statue
  bool decay_applied = false;
  friend bool operator==(const BuildingFootprint&, const BuildingFootprint&) = default;
};

struct VillageWorld {
  TileWorld world;
  std::vector<BuildingFootprint> buildings;
  Coord plaque;
  Coord town_center;
  std::vector<Coord> main_road;  // hall door side first, water side last
  DynamicContext context;
  friend bool operator==(const VillageWorld&, const VillageWorld&) = default;
};

struct DecayStats {
  int walls_total = 0;
  int walls_destroyed = 0;
};

VillageWorld empty_village();

// Lake tier for a final eco_health; total water area is lakes * tiles_per_lake.
const LakeTier& lake_tier_for(const EcosystemState& eco, const VillageRenderConfig& config);

void place_water(const VillageHistory& history, RandomStream& stream, VillageWorld& village,
                 const VillageRenderConfig& config);
// Statue, plaque, spawn and the worship hall. Throws Error(GenerationFailed)
// when no hall placement fits within the search radius.
void place_fixed_features(RandomStream& stream, VillageWorld& village, const VillageRenderConfig& config);
void grow_roads(RandomStream& stream, VillageWorld& village, const VillageRenderConfig& config);
double decay_chance(double temperature, const BoundedValue& bounds, const VillageRenderConfig& config);
DecayStats apply_decay(const VillageHistory& history, RandomStream& stream, VillageWorld& village,
                       const VillageRenderConfig& config);
void populate_items(const VillageHistory& history, RandomStream& stream, VillageWorld& village,
                    const VillageRenderConfig& config);

double toy_chance(const VillageHistory& history, const VillageRenderConfig& config);
double predator_skeleton_chance(const VillageHistory& history, const VillageRenderConfig& config);
bool crops_failed(const VillageHistory& history);

DynamicContext village_context(const VillageHistory& history, RandomStream& stream, const Content& content);
// Fills every object and tile description through the two text layers.
void describe_village(const VillageHistory& history, RandomStream& stream, VillageWorld& village,
                      const Content& content);

// Empty when every building interior is reachable from the spawn.
std::optional<std::string> village_connectivity_problem(const VillageWorld& village);

// Full rendering with bounded retries (8 attempts, then Error(GenerationFailed)).
VillageWorld render_village(const VillageHistory& history, WorldSeed seed, const GenConfig& config,
                            const Content& content = default_content());

std::string number_word(int n);

}  // namespace forensica
