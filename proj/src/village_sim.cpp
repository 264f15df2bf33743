#include "forensica/village_sim.hpp"

#include <algorithm>
#include <cmath>

#include "forensica/error.hpp"

namespace forensica {

namespace {

BoundedValue start_value(RandomStream& stream, const BoundedVariable& v) {
  return {stream.uniform_real(v.start.min, v.start.max), v.min_cap, v.max_cap, v.max_drift};
}

void fluctuate(BoundedValue& v, RandomStream& stream) {
  const double delta = stream.uniform_real(-v.max_drift, v.max_drift);
  v.value = std::clamp(v.value + delta, v.min_cap, v.max_cap);
}

int stochastic_round(double x, RandomStream& stream) {
  return static_cast<int>(std::floor(x + stream.uniform01()));
}

bool already_ended(const EcosystemState& eco, const SocietyState& society) {
  return eco.eco_health.value <= 0.0 || society.population <= 0 || society.food_store <= 0.0;
}

}  // namespace

std::string_view ending_name(EndingKind kind) {
  switch (kind) {
    case EndingKind::EcosystemCollapse: return "EcosystemCollapse";
    case EndingKind::OverrunByPredators: return "OverrunByPredators";
    case EndingKind::Famine: return "Famine";
  }
  return "EcosystemCollapse";
}

std::optional<EndingKind> ending_from_name(std::string_view name) {
  for (EndingKind k : kAllEndings) {
    if (ending_name(k) == name) return k;
  }
  return std::nullopt;
}

double damage_chance(double temperature, const VillageSimConfig& config) {
  return std::clamp(config.damage_chance_base + config.damage_chance_per_degree * temperature, 0.0, 1.0);
}

double crop_yield(double temperature, const VillageSimConfig& config) {
  const double off = (temperature - config.crop_optimal_temperature) / config.crop_temperature_tolerance;
  return config.crop_yield_peak * std::max(0.0, 1.0 - off * off);
}

std::pair<EcosystemState, SocietyState> init_village(RandomStream& stream,
                                                     const VillageSimConfig& config) {
  for (const auto* v : {&config.temperature, &config.hostile_fauna, &config.eco_health}) {
    if (v->start.min > v->start.max || v->min_cap > v->max_cap) {
      throw Error(ErrorKind::InvalidConfig, "village variable range has min > max");
    }
  }
  if (config.population_start.min > config.population_start.max ||
      config.food_start.min > config.food_start.max ||
      config.sacred_number.min > config.sacred_number.max) {
    throw Error(ErrorKind::InvalidConfig, "village starting range has min > max");
  }
  EcosystemState eco;
  eco.temperature = start_value(stream, config.temperature);
  eco.hostile_fauna = start_value(stream, config.hostile_fauna);
  eco.eco_health = start_value(stream, config.eco_health);

  SocietyState society;
  society.population =
      static_cast<int>(stream.uniform_int(config.population_start.min, config.population_start.max));
  society.working_age = static_cast<int>(std::floor(society.population * config.working_age_fraction));
  society.food_store = stream.uniform_real(config.food_start.min, config.food_start.max);
  society.culture.craft_material = config.materials[stream.index(config.materials.size())];
  society.culture.sacred_number =
      static_cast<int>(stream.uniform_int(config.sacred_number.min, config.sacred_number.max));
  society.culture.cultivated_flower = config.flowers[stream.index(config.flowers.size())];
  return {eco, society};
}

StepOutcome step_village(EcosystemState& eco, SocietyState& society, RandomStream& stream,
                         const VillageSimConfig& config, int tick) {
  if (already_ended(eco, society)) {
    throw Error(ErrorKind::IllegalState, "step_village called on a village that has already ended");
  }
  StepOutcome out;

  // (1) weather and predators drift.
  fluctuate(eco.temperature, stream);
  fluctuate(eco.hostile_fauna, stream);

  // (2) ecosystem damage, likelier when hot.
  if (stream.chance(damage_chance(eco.temperature.value, config))) {
    const double amount = std::min(stream.uniform_real(config.damage_amount.min, config.damage_amount.max),
                                   eco.eco_health.max_drift);
    eco.eco_health.value = std::max(eco.eco_health.min_cap, eco.eco_health.value - amount);
  }
  if (eco.eco_health.value <= 0.0) {
    out.ended = VillageEnding{EndingKind::EcosystemCollapse, tick};
    return out;
  }

  // (3) predation.
  out.deaths = std::max(0, stochastic_round(eco.hostile_fauna.value * config.kill_rate, stream));
  const int before = society.population;
  society.population = std::max(0, society.population - out.deaths);
  if (before > 0) {
    society.working_age = static_cast<int>(
        std::floor(static_cast<double>(society.working_age) * society.population / before));
  }
  if (society.population <= 0) {
    out.ended = VillageEnding{EndingKind::OverrunByPredators, tick};
    return out;
  }

  // (4) births from surplus food.
  const double need = society.population * config.ration * config.reserve_ticks;
  const double surplus = std::clamp((society.food_store - need) / need, 0.0, 1.0);
  out.births = std::max(0, stochastic_round(society.population * config.birth_rate * surplus, stream));
  society.population += out.births;

  // (5) harvest minus consumption.
  const int farmers = std::min(society.population, config.field_capacity);
  society.food_store += crop_yield(eco.temperature.value, config) * farmers -
                        society.population * config.ration;
  if (society.food_store <= 0.0) {
    society.food_store = 0.0;
    out.ended = VillageEnding{EndingKind::Famine, tick};
  }
  return out;
}

VillageHistory run_village(WorldSeed seed, const VillageSimConfig& config) {
  RandomStream stream = derive_stream(seed, "village.sim");
  auto [eco, society] = init_village(stream, config);
  VillageHistory history;
  for (int tick = 1; tick <= config.tick_limit; ++tick) {
    const StepOutcome out = step_village(eco, society, stream, config, tick);
    history.birth_trace.push_back(out.births);
    if (out.ended) {
      history.ending = *out.ended;
      history.final_eco = eco;
      history.final_society = society;
      history.tick_count = tick;
      return history;
    }
  }
  throw Error(ErrorKind::NonConvergence,
              "village simulation did not end within " + std::to_string(config.tick_limit) + " ticks");
}

}  // namespace forensica
