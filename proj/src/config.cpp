#include "forensica/config.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "forensica/error.hpp"
#include "forensica/rng.hpp"
#include "json.hpp"

namespace forensica {

using nlohmann::json;

NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(IntRange, min, max)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(RealRange, min, max)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(BoundedVariable, start, min_cap, max_cap, max_drift)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(LakeTier, min_eco_fraction, lakes, tiles_per_lake)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(
    VillageSimConfig, temperature, hostile_fauna, eco_health, population_start, working_age_fraction,
    food_start, damage_chance_base, damage_chance_per_degree, damage_amount, kill_rate, birth_rate,
    reserve_ticks, field_capacity, crop_yield_peak, crop_optimal_temperature,
    crop_temperature_tolerance, ration, sacred_number, materials, flowers, tick_limit)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(
    VillageRenderConfig, lake_tiers, large_water_min, fragment_count, fragment_radius,
    hall_search_radius, road_budget, branch_chance, branch_length, house_chance, farm_chance_base,
    farm_chance_per_tile, decay_floor, decay_per_degree, table_chance, chairs_per_table,
    cutlery_chance, toy_chance_max, toys_per_house_max, toy_birth_reference, perfume_chance,
    bed_chance, cattle_skeleton_chance, hay_chance, crop_density, weed_density, failed_crop_factor,
    failed_weed_factor, predator_skeleton_per_fauna)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(StationConfig, width, height, corridor_count,
                                                corridor_length, room_count, room_size,
                                                room_attempts, scenery_attempts, barrel_chance,
                                                crew_size)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(
    StationSimConfig, fire_spread, fire_burnout, fire_spreads_diagonally, anomaly_self_ignite,
    anomaly_patience, shot_burst_radius, explosion_radius, sight_radius, hearing_radius,
    exposure_turns, tick_cap, shot_range, panic_see_anomaly, panic_see_body, panic_see_fire,
    panic_hear_scream, panic_hear_explosion, panic_hear_gunshot, panic_told_anomaly,
    panic_told_death, panic_decay, shelter_threshold, alert_threshold, confront_chance)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(EvidenceConfig, start_minute,
                                                floor_tiles_per_terminal, min_terminals,
                                                update_chance, reply_chance)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(SessionConfig, torch_radius,
                                                torch_aperture_degrees, village_sight_radius)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(GenConfig, village, render, station, sim, evidence,
                                                session)

namespace {

[[noreturn]] void bad(const std::string& field, const std::string& why) {
  throw Error(ErrorKind::InvalidConfig, "config field '" + field + "': " + why);
}

void check_range(const std::string& field, const IntRange& r) {
  if (r.min > r.max) bad(field, "min > max");
}

void check_range(const std::string& field, const RealRange& r) {
  if (r.min > r.max) bad(field, "min > max");
}

void check_probability(const std::string& field, double p) {
  if (!(p >= 0.0 && p <= 1.0)) bad(field, "must be a probability in [0, 1]");
}

void check_positive(const std::string& field, double v) {
  if (!(v > 0.0)) bad(field, "must be > 0");
}

void check_variable(const std::string& field, const BoundedVariable& v) {
  check_range(field + ".start", v.start);
  if (v.min_cap > v.max_cap) bad(field + ".min_cap", "min_cap > max_cap");
  if (v.start.min < v.min_cap || v.start.max > v.max_cap) bad(field + ".start", "outside caps");
  if (v.max_drift < 0.0) bad(field + ".max_drift", "must be >= 0");
}

// Rejects keys the defaults do not know, so typos surface as errors.
void check_known_keys(const json& given, const json& known, const std::string& path) {
  if (!given.is_object() || !known.is_object()) return;
  for (const auto& [key, value] : given.items()) {
    const std::string field = path.empty() ? key : path + "." + key;
    auto it = known.find(key);
    if (it == known.end()) bad(field, "unknown field");
    if (it->is_object()) {
      if (!value.is_object()) bad(field, "expected an object");
      check_known_keys(value, *it, field);
    }
  }
}

}  // namespace

void validate_config(const GenConfig& c) {
  const auto& v = c.village;
  check_variable("village.temperature", v.temperature);
  check_variable("village.hostile_fauna", v.hostile_fauna);
  check_variable("village.eco_health", v.eco_health);
  if (v.eco_health.min_cap != 0.0) bad("village.eco_health.min_cap", "must be 0");
  check_range("village.population_start", v.population_start);
  if (v.population_start.min < 1) bad("village.population_start.min", "must be >= 1");
  check_probability("village.working_age_fraction", v.working_age_fraction);
  check_range("village.food_start", v.food_start);
  if (v.food_start.min <= 0.0) bad("village.food_start.min", "must be > 0");
  check_range("village.damage_amount", v.damage_amount);
  if (v.damage_amount.min < 0.0) bad("village.damage_amount.min", "must be >= 0");
  if (v.kill_rate < 0.0) bad("village.kill_rate", "must be >= 0");
  if (v.birth_rate < 0.0) bad("village.birth_rate", "must be >= 0");
  check_positive("village.reserve_ticks", v.reserve_ticks);
  if (v.field_capacity < 0) bad("village.field_capacity", "must be >= 0");
  check_positive("village.crop_temperature_tolerance", v.crop_temperature_tolerance);
  check_positive("village.ration", v.ration);
  check_range("village.sacred_number", v.sacred_number);
  if (v.sacred_number.min < 3 || v.sacred_number.max > 9) bad("village.sacred_number", "must lie in [3, 9]");
  if (v.materials.empty()) bad("village.materials", "must not be empty");
  if (v.flowers.size() < 5) bad("village.flowers", "needs at least 5 flowers");
  if (v.tick_limit < 1) bad("village.tick_limit", "must be >= 1");

  const auto& r = c.render;
  if (r.lake_tiers.empty()) bad("render.lake_tiers", "must not be empty");
  if (r.lake_tiers.front().min_eco_fraction != 0.0) bad("render.lake_tiers[0].min_eco_fraction", "must be 0");
  for (std::size_t i = 0; i < r.lake_tiers.size(); ++i) {
    const auto& t = r.lake_tiers[i];
    const std::string field = "render.lake_tiers[" + std::to_string(i) + "]";
    if (t.lakes < 1) bad(field + ".lakes", "must be >= 1");
    if (t.tiles_per_lake < 1) bad(field + ".tiles_per_lake", "must be >= 1");
    if (i > 0) {
      const auto& p = r.lake_tiers[i - 1];
      if (t.min_eco_fraction <= p.min_eco_fraction) bad(field + ".min_eco_fraction", "tiers must ascend");
      if (t.lakes * t.tiles_per_lake < p.lakes * p.tiles_per_lake) bad(field, "lake area must not shrink");
    }
  }
  check_range("render.fragment_count", r.fragment_count);
  check_range("render.road_budget", r.road_budget);
  check_range("render.branch_length", r.branch_length);
  check_range("render.chairs_per_table", r.chairs_per_table);
  for (auto [name, p] : {std::pair{"render.branch_chance", r.branch_chance},
                         {"render.house_chance", r.house_chance},
                         {"render.table_chance", r.table_chance},
                         {"render.cutlery_chance", r.cutlery_chance},
                         {"render.toy_chance_max", r.toy_chance_max},
                         {"render.perfume_chance", r.perfume_chance},
                         {"render.bed_chance", r.bed_chance},
                         {"render.cattle_skeleton_chance", r.cattle_skeleton_chance},
                         {"render.hay_chance", r.hay_chance},
                         {"render.crop_density", r.crop_density},
                         {"render.weed_density", r.weed_density}}) {
    check_probability(name, p);
  }
  check_positive("render.toy_birth_reference", r.toy_birth_reference);

  const auto& s = c.station;
  if (s.width < 40 || s.height < 40) bad("station.width", "station grid must be at least 40x40");
  check_range("station.corridor_count", s.corridor_count);
  if (s.corridor_count.min < 1) bad("station.corridor_count.min", "must be >= 1");
  check_range("station.corridor_length", s.corridor_length);
  if (s.corridor_length.min < 4) bad("station.corridor_length.min", "must be >= 4");
  check_range("station.room_count", s.room_count);
  if (s.room_count.min < 5) bad("station.room_count.min", "needs room for the five fixed room types");
  check_range("station.room_size", s.room_size);
  if (s.room_size.min < 4) bad("station.room_size.min", "must be >= 4");
  check_range("station.crew_size", s.crew_size);
  if (s.crew_size.min < 3 || s.crew_size.max > 15) bad("station.crew_size", "must lie in [3, 15]");
  check_probability("station.barrel_chance", s.barrel_chance);

  const auto& m = c.sim;
  check_probability("sim.fire_spread", m.fire_spread);
  check_probability("sim.fire_burnout", m.fire_burnout);
  check_probability("sim.anomaly_self_ignite", m.anomaly_self_ignite);
  check_probability("sim.confront_chance", m.confront_chance);
  if (m.anomaly_patience < 1) bad("sim.anomaly_patience", "must be >= 1");
  if (m.exposure_turns < 0) bad("sim.exposure_turns", "must be >= 0");
  if (m.tick_cap < 1) bad("sim.tick_cap", "must be >= 1");
  if (m.sight_radius < 1) bad("sim.sight_radius", "must be >= 1");

  const auto& e = c.evidence;
  check_range("evidence.start_minute", e.start_minute);
  if (e.start_minute.min < 0 || e.start_minute.max >= 24 * 60) bad("evidence.start_minute", "must lie within one day");
  if (e.floor_tiles_per_terminal < 1) bad("evidence.floor_tiles_per_terminal", "must be >= 1");
  check_probability("evidence.update_chance", e.update_chance);
  check_probability("evidence.reply_chance", e.reply_chance);

  if (c.session.torch_radius < 1) bad("session.torch_radius", "must be >= 1");
  if (c.session.torch_aperture_degrees < 1 || c.session.torch_aperture_degrees > 360) {
    bad("session.torch_aperture_degrees", "must lie in [1, 360]");
  }
}

GenConfig config_from_json_text(const std::string& text) {
  json given;
  try {
    given = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::InvalidConfig, std::string("config is not valid JSON: ") + e.what());
  }
  if (!given.is_object()) throw Error(ErrorKind::InvalidConfig, "config must be a JSON object");
  const json defaults = GenConfig{};
  check_known_keys(given, defaults, "");
  json merged = defaults;
  merged.merge_patch(given);
  GenConfig config;
  try {
    config = merged.get<GenConfig>();
  } catch (const json::exception& e) {
    throw Error(ErrorKind::InvalidConfig, std::string("config has a wrongly typed field: ") + e.what());
  }
  validate_config(config);
  return config;
}

GenConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::InvalidConfig, "cannot open config file " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return config_from_json_text(buffer.str());
}

std::string config_to_json_text(const GenConfig& config) {
  return json(config).dump(2) + "\n";
}

std::string config_digest(const GenConfig& config) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(fnv1a64(json(config).dump())));
  return buf;
}

}  // namespace forensica
