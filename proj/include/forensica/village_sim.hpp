#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "forensica/config.hpp"
#include "forensica/rng.hpp"

namespace forensica {

struct BoundedValue {
  double value = 0.0;
  double min_cap = 0.0;
  double max_cap = 0.0;
  double max_drift = 0.0;
  friend bool operator==(const BoundedValue&, const BoundedValue&) = default;
};

struct EcosystemState {
  BoundedValue temperature;
  BoundedValue hostile_fauna;  // predator density
  BoundedValue eco_health;     // agricultural carrying capacity
  friend bool operator==(const EcosystemState&, const EcosystemState&) = default;
};

struct CultureProfile {
  std::string craft_material;
  int sacred_number = 3;
  std::string cultivated_flower;
  friend bool operator==(const CultureProfile&, const CultureProfile&) = default;
};

struct SocietyState {
  int population = 0;
  int working_age = 0;  // tracked and serialized; no step rule reads it
  double food_store = 0.0;
  CultureProfile culture;
  friend bool operator==(const SocietyState&, const SocietyState&) = default;
};

enum class EndingKind { EcosystemCollapse, OverrunByPredators, Famine };

std::string_view ending_name(EndingKind kind);
std::optional<EndingKind> ending_from_name(std::string_view name);
inline constexpr EndingKind kAllEndings[] = {EndingKind::EcosystemCollapse,
                                             EndingKind::OverrunByPredators, EndingKind::Famine};

struct VillageEnding {
  EndingKind kind = EndingKind::EcosystemCollapse;
  int tick_of_collapse = 0;
  friend bool operator==(const VillageEnding&, const VillageEnding&) = default;
};

struct VillageHistory {
  VillageEnding ending;
  EcosystemState final_eco;
  SocietyState final_society;
  std::vector<int> birth_trace;  // births on each tick, index 0 = tick 1
  int tick_count = 0;
  friend bool operator==(const VillageHistory&, const VillageHistory&) = default;
};

struct StepOutcome {
  std::optional<VillageEnding> ended;
  int births = 0;
  int deaths = 0;
};

std::pair<EcosystemState, SocietyState> init_village(RandomStream& stream,
                                                     const VillageSimConfig& config);

// One tick. Draw order: temperature, fauna, damage roll, [damage amount],
// predation rounding, birth rounding. `tick` is the 1-based tick number
// recorded in a resulting ending.
StepOutcome step_village(EcosystemState& eco, SocietyState& society, RandomStream& stream,
                         const VillageSimConfig& config, int tick);

VillageHistory run_village(WorldSeed seed, const VillageSimConfig& config);

double damage_chance(double temperature, const VillageSimConfig& config);
double crop_yield(double temperature, const VillageSimConfig& config);

}  // namespace forensica
