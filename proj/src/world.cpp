#include "forensica/world.hpp"

#include <algorithm>
#include <numeric>

#include "forensica/error.hpp"

namespace forensica {

namespace {

constexpr int kMaxStationAttempts = 8;

WorldSeed attempt_seed(WorldSeed seed, int attempt) {
  if (attempt == 0) return seed;
  return WorldSeed{derive_stream(seed, "station.retry#" + std::to_string(attempt)).next_u64()};
}

WorldBundle finalize_station(WorldSeed seed, WorldSeed run_seed, const GenConfig& config, const Content& content,
                             const SimState& sim) {
  const Grammar& g = content.station_grammar;
  Station st = sim.build.station;

  auto bodies_stream = derive_stream(run_seed, "station.bodies");
  std::vector<std::size_t> order(sim.crew.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  bodies_stream.shuffle(std::span<std::size_t>(order));
  StationTruth truth;
  for (std::size_t k = 0; k < order.size(); ++k) {
    const CrewAgent& a = sim.crew[order[k]];
    if (!a.fate) throw Error(ErrorKind::Integrity, a.member.name + " has no fate record");
    PlacedObject body;
    body.id = "body-" + std::to_string(k + 1);
    body.position = a.fate->position;
    body.kind = ObjectKind::Body;
    body.description_key = "body";
    body.description = body_description(a.fate->cause, a.member.profession, g, bodies_stream);
    body.blocking = false;
    st.grid.objects.push_back(body);
    truth.bodies.push_back(BodyTruth{body.id, a.member.id, a.member.name, a.member.profession, *a.fate});
  }
  auto text = derive_stream(run_seed, "station.text.final");
  for (auto& o : st.grid.objects) {
    if (o.description.empty()) o.description = g.expand(o.description_key, text);
  }

  auto clock = derive_stream(run_seed, "evidence.clock");
  truth.start_minute =
      static_cast<int>(clock.uniform_int(config.evidence.start_minute.min, config.evidence.start_minute.max));
  truth.sim_turns = sim.turn;
  truth.climax_turn = sim.climax_turn;
  auto words = derive_stream(run_seed, "evidence.text");
  const auto stamped = stamp_messages(sim.message_log, truth.start_minute, sim.crew, g, words, config.evidence);
  auto place = derive_stream(run_seed, "evidence.place");
  auto terminals = place_terminals(st, stamped, sim.crew, place, config.evidence);
  for (auto& t : terminals) {
    PlacedObject o;
    o.id = t.id;
    o.position = t.position;
    o.kind = ObjectKind::Terminal;
    o.description_key = "terminal";
    o.description = g.expand("terminal", text);
    o.blocking = false;
    st.grid.objects.push_back(std::move(o));
    // Internal bookkeeping stays out of the world file.
    t.message.symbol.clear();
    t.message.bindings.clear();
  }

  WorldBundle b;
  b.seed = seed;
  b.config_digest = config_digest(config);
  b.game = GameKind::Station;
  b.world = std::move(st.grid);
  b.rooms = std::move(st.rooms);
  b.corridors = std::move(st.corridors);
  b.entrance_door = st.entrance_door;
  b.terminals = std::move(terminals);
  b.ground_truth = GroundTruth{std::nullopt, std::move(truth)};
  return b;
}

}  // namespace

std::string_view game_kind_name(GameKind g) { return g == GameKind::Village ? "village" : "station"; }

std::optional<GameKind> game_kind_from_name(std::string_view name) {
  if (name == "village") return GameKind::Village;
  if (name == "station") return GameKind::Station;
  return std::nullopt;
}

Station WorldBundle::station() const {
  Station s;
  s.grid = world;
  s.rooms = rooms;
  s.corridors = corridors;
  s.entrance_door = entrance_door.value_or(Coord{});
  return s;
}

VillageTruth village_truth(const VillageHistory& h) {
  VillageTruth t;
  t.ending = h.ending.kind;
  t.tick_count = h.tick_count;
  t.final_temperature = h.final_eco.temperature.value;
  t.final_fauna = h.final_eco.hostile_fauna.value;
  t.final_eco_health = h.final_eco.eco_health.value;
  t.final_population = h.final_society.population;
  t.final_food = h.final_society.food_store;
  t.culture = h.final_society.culture;
  t.total_births = std::accumulate(h.birth_trace.begin(), h.birth_trace.end(), 0);
  return t;
}

std::string body_description(FateCause cause, Profession profession, const Grammar& g, RandomStream& stream) {
  const char* state = "body_burned";
  if (cause == FateCause::Exposure) state = "body_frozen";
  if (cause == FateCause::Explosion) state = "body_blast";
  return g.expand(state, stream) + " " + g.expand("wear_" + std::string(profession_name(profession)), stream);
}

WorldBundle generate_village_bundle(WorldSeed seed, const GenConfig& config, const Content& content) {
  validate_config(config);
  const VillageHistory history = run_village(seed, config.village);
  VillageWorld v = render_village(history, seed, config, content);
  WorldBundle b;
  b.seed = seed;
  b.config_digest = config_digest(config);
  b.game = GameKind::Village;
  b.world = std::move(v.world);
  b.buildings = std::move(v.buildings);
  b.ground_truth = GroundTruth{village_truth(history), std::nullopt};
  return b;
}

StationRun run_station_pipeline(WorldSeed seed, const GenConfig& config, const Content& content) {
  validate_config(config);
  std::string last_problem;
  for (int attempt = 0; attempt < kMaxStationAttempts; ++attempt) {
    const WorldSeed run_seed = attempt_seed(seed, attempt);
    try {
      StationRun r{build_station(run_seed, config, content), SimState{}, WorldBundle{}};
      r.sim = run_station_sim(r.build, run_seed, config);
      r.bundle = finalize_station(seed, run_seed, config, content, r.sim);
      return r;
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::GenerationFailed) throw;
      last_problem = e.what();
    }
  }
  throw Error(ErrorKind::GenerationFailed, "station generation failed after " +
                                               std::to_string(kMaxStationAttempts) + " attempts: " + last_problem);
}

WorldBundle generate_station_bundle(WorldSeed seed, const GenConfig& config, const Content& content) {
  return run_station_pipeline(seed, config, content).bundle;
}

WorldBundle generate_world(GameKind game, WorldSeed seed, const GenConfig& config, const Content& content) {
  return game == GameKind::Village ? generate_village_bundle(seed, config, content)
                                   : generate_station_bundle(seed, config, content);
}

}  // namespace forensica
