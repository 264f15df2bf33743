#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace forensica {

struct IntRange {
  int min = 0;
  int max = 0;
  friend bool operator==(const IntRange&, const IntRange&) = default;
};

struct RealRange {
  double min = 0.0;
  double max = 0.0;
  friend bool operator==(const RealRange&, const RealRange&) = default;
};

// One bounded ecosystem variable: starting range, hard caps, per-tick drift cap.
struct BoundedVariable {
  RealRange start;
  double min_cap = 0.0;
  double max_cap = 0.0;
  double max_drift = 0.0;
  friend bool operator==(const BoundedVariable&, const BoundedVariable&) = default;
};

struct VillageSimConfig {
  BoundedVariable temperature{{16.0, 24.0}, 0.0, 40.0, 1.5};
  BoundedVariable hostile_fauna{{1.0, 3.0}, 0.0, 10.0, 0.5};
  BoundedVariable eco_health{{60.0, 90.0}, 0.0, 100.0, 4.0};
  IntRange population_start{40, 60};
  double working_age_fraction = 0.6;
  RealRange food_start{200.0, 400.0};

  // Ecosystem damage probability = clamp(base + per_degree * temperature, 0, 1).
  double damage_chance_base = -0.01;
  double damage_chance_per_degree = 0.01;
  RealRange damage_amount{1.0, 4.0};

  double kill_rate = 0.4;   // deaths per unit of fauna per tick
  double birth_rate = 0.03;  // births per head per tick at full surplus
  double reserve_ticks = 10.0;
  int field_capacity = 80;
  double crop_yield_peak = 1.7;
  double crop_optimal_temperature = 18.0;
  double crop_temperature_tolerance = 16.0;
  double ration = 1.0;

  IntRange sacred_number{3, 9};
  std::vector<std::string> materials{"wood", "stone", "bone", "copper", "clay"};
  std::vector<std::string> flowers{"poppy", "lotus", "iris", "marigold", "jasmine", "lily"};

  int tick_limit = 10000;

  friend bool operator==(const VillageSimConfig&, const VillageSimConfig&) = default;
};

struct LakeTier {
  double min_eco_fraction = 0.0;  // tier applies when eco_health/max_cap >= this
  int lakes = 1;
  int tiles_per_lake = 10;
  friend bool operator==(const LakeTier&, const LakeTier&) = default;
};

struct VillageRenderConfig {
  std::vector<LakeTier> lake_tiers{
      {0.0, 1, 12}, {0.25, 2, 20}, {0.5, 3, 30}, {0.75, 4, 45}};
  int large_water_min = 150;
  IntRange fragment_count{5, 9};
  int fragment_radius = 4;
  int hall_search_radius = 15;
  IntRange road_budget{6, 12};
  double branch_chance = 0.04;
  IntRange branch_length{6, 16};
  double house_chance = 0.35;
  double farm_chance_base = 0.0;
  double farm_chance_per_tile = 0.02;
  double decay_floor = 0.02;
  double decay_per_degree = 0.008;

  // Item tables.
  double table_chance = 0.8;
  IntRange chairs_per_table{1, 3};
  double cutlery_chance = 0.6;
  double toy_chance_max = 0.7;
  int toys_per_house_max = 3;
  double toy_birth_reference = 1.5;  // mean births/tick giving full toy chance
  double perfume_chance = 0.3;
  double bed_chance = 0.7;
  double cattle_skeleton_chance = 0.5;
  double hay_chance = 0.6;
  double crop_density = 0.5;
  double weed_density = 0.08;
  double failed_crop_factor = 0.25;
  double failed_weed_factor = 4.0;
  double predator_skeleton_per_fauna = 0.05;

  friend bool operator==(const VillageRenderConfig&, const VillageRenderConfig&) = default;
};

struct StationConfig {
  int width = 72;
  int height = 56;
  IntRange corridor_count{3, 6};
  IntRange corridor_length{10, 20};
  IntRange room_count{6, 10};
  IntRange room_size{4, 9};
  int room_attempts = 400;
  int scenery_attempts = 40;
  double barrel_chance = 0.5;  // per laboratory
  IntRange crew_size{5, 6};

  friend bool operator==(const StationConfig&, const StationConfig&) = default;
};

struct StationSimConfig {
  double fire_spread = 0.12;
  double fire_burnout = 0.08;
  bool fire_spreads_diagonally = false;
  double anomaly_self_ignite = 0.05;
  int anomaly_patience = 8;
  int shot_burst_radius = 2;
  int explosion_radius = 2;
  int sight_radius = 12;
  int hearing_radius = 14;
  int exposure_turns = 5;
  int tick_cap = 2000;
  int shot_range = 6;

  double panic_see_anomaly = 100.0;
  double panic_see_body = 40.0;
  double panic_see_fire = 20.0;
  double panic_hear_scream = 25.0;
  double panic_hear_explosion = 30.0;
  double panic_hear_gunshot = 15.0;
  double panic_told_anomaly = 60.0;
  double panic_told_death = 30.0;
  double panic_decay = 0.5;
  double shelter_threshold = 50.0;
  double alert_threshold = 90.0;

  double confront_chance = 0.5;

  friend bool operator==(const StationSimConfig&, const StationSimConfig&) = default;
};

struct EvidenceConfig {
  IntRange start_minute{6 * 60, 22 * 60};
  int floor_tiles_per_terminal = 60;
  int min_terminals = 5;
  double update_chance = 0.3;
  double reply_chance = 0.5;

  friend bool operator==(const EvidenceConfig&, const EvidenceConfig&) = default;
};

struct SessionConfig {
  int torch_radius = 9;
  int torch_aperture_degrees = 90;
  int village_sight_radius = 8;

  friend bool operator==(const SessionConfig&, const SessionConfig&) = default;
};

struct GenConfig {
  VillageSimConfig village;
  VillageRenderConfig render;
  StationConfig station;
  StationSimConfig sim;
  EvidenceConfig evidence;
  SessionConfig session;

  friend bool operator==(const GenConfig&, const GenConfig&) = default;
};

// Throws Error(InvalidConfig) naming the offending field.
void validate_config(const GenConfig& config);

// Partial JSON objects override the defaults; unknown keys are rejected.
GenConfig config_from_json_text(const std::string& text);
GenConfig load_config_file(const std::string& path);
std::string config_to_json_text(const GenConfig& config);

// 16 hex digits, FNV-1a over the canonical JSON form.
std::string config_digest(const GenConfig& config);

}  // namespace forensica
