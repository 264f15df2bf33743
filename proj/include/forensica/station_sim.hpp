#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "forensica/config.hpp"
#include "forensica/content.hpp"
#include "forensica/rng.hpp"
#include "forensica/station.hpp"

namespace forensica {

enum class FateCause { BurnedByAnomaly, Fire, Exposure, Explosion };
enum class Act { Opening, Panic, Climax };
// Ordered by urgency: a percept only interrupts plans less urgent than itself.
enum class PlanKind { Idle, Investigate, Shelter, Meet, Flee, Armory, Confront, Outside };
enum class MessageKind { Report, Intention, Update };
enum class DynamicKind { Fire, FuelBarrel };

std::string_view fate_cause_name(FateCause c);
std::optional<FateCause> fate_cause_from_name(std::string_view name);
std::string_view act_name(Act a);
std::string_view plan_kind_name(PlanKind p);
std::string_view message_kind_name(MessageKind k);
std::optional<MessageKind> message_kind_from_name(std::string_view name);
inline constexpr FateCause kAllCauses[] = {FateCause::BurnedByAnomaly, FateCause::Fire, FateCause::Exposure,
                                           FateCause::Explosion};

int plan_urgency(PlanKind p);

struct Plan {
  PlanKind kind = PlanKind::Idle;
  Coord target;
  friend bool operator==(const Plan&, const Plan&) = default;
};

struct FateRecord {
  FateCause cause = FateCause::Fire;
  int turn = 0;
  Coord position;
  friend bool operator==(const FateRecord&, const FateRecord&) = default;
};

struct Knowledge {
  bool anomaly_known = false;
  std::optional<Coord> anomaly_last_seen;
  std::set<int> known_deaths;   // crew ids
  std::set<int> danger_areas;   // area ids from area_map
  std::set<int> fire_areas;     // areas already reported burning
  friend bool operator==(const Knowledge&, const Knowledge&) = default;
};

enum class PerceptKind { Scream, Explosion, Gunshot, ToldAnomaly, ToldDeath };

struct Percept {
  PerceptKind kind = PerceptKind::Scream;
  Coord position;
  int subject = -1;  // crew id for ToldDeath
  friend bool operator==(const Percept&, const Percept&) = default;
};

struct CrewAgent {
  CrewMember member;
  Coord position;
  bool alive = true;
  double panic = 0.0;
  Act act = Act::Opening;
  Plan plan;
  Knowledge knowledge;
  int turns_outside = 0;
  std::optional<FateRecord> fate;
  bool armed = false;
  bool saw_anomaly_last_turn = false;
  bool sighting_to_radio = false;
  std::vector<Percept> inbox;
  std::vector<Coord> path;  // cached route toward plan.target
  friend bool operator==(const CrewAgent&, const CrewAgent&) = default;
};

struct AnomalyAgent {
  Coord position;
  std::optional<int> target;
  std::optional<Coord> waypoint;
  int turns_since_seen_target = 0;
  std::optional<int> shot_by;  // set during the crew phase of the current tick
  bool present = true;
  std::vector<Coord> path;
  friend bool operator==(const AnomalyAgent&, const AnomalyAgent&) = default;
};

struct DynamicObject {
  DynamicKind kind = DynamicKind::Fire;
  Coord position;
  int state = 0;  // fire: turns burning; barrel: 0 intact, 1 exploded
  friend bool operator==(const DynamicObject&, const DynamicObject&) = default;
};

enum class EventKind {
  SimStart,
  Sighted,
  Heard,
  Radio,
  PlanChanged,
  ActChanged,
  ClimaxTriggered,
  Shot,
  Retarget,
  Hint,
  Ignited,
  Exploded,
  WallDestroyed,
  Death,
  Exited,
  SimEnd,
};
std::string_view event_kind_name(EventKind k);

struct SimEvent {
  int turn = 0;
  int seq = 0;
  std::string actor;  // "crew-N", "anomaly", "fire", "barrel", "station"
  EventKind kind = EventKind::SimStart;
  Coord position;
  int subject = -1;  // crew id when relevant
  std::string detail;
  friend bool operator==(const SimEvent&, const SimEvent&) = default;
};

struct RadioMessage {
  int sender = 0;
  std::string sender_name;
  int turn = 0;
  int seq = 0;  // position in the event log
  MessageKind kind = MessageKind::Report;
  std::string symbol;  // grammar symbol for the body
  std::map<std::string, std::string> bindings;
  // Filled by the evidence stage.
  std::string timestamp;
  std::string body;
  std::string reply;
  friend bool operator==(const RadioMessage&, const RadioMessage&) = default;
};

struct SimState {
  StationBuild build;
  GenConfig config;
  std::vector<int> areas;  // area_map of the station at construction
  int turn = 0;
  std::vector<CrewAgent> crew;
  AnomalyAgent anomaly;
  std::vector<DynamicObject> dynamics;
  std::vector<std::uint8_t> burning;
  std::vector<std::uint8_t> walkable;  // passable tiles, blocking objects excluded
  std::vector<SimEvent> event_log;
  std::vector<RadioMessage> message_log;
  bool climax_triggered = false;
  int climax_turn = -1;
  std::optional<std::size_t> meeting_room;
  RandomStream stream{0};

  Station& station() { return build.station; }
  const Station& station() const { return build.station; }
  int alive_count() const;
};

SimState init_sim(const StationBuild& build, WorldSeed seed, const GenConfig& config);

// One full tick: crew in id order, then the anomaly, then dynamic objects.
// Throws Error(NonConvergence) once the tick cap is reached.
void step_sim(SimState& state);
void crew_turn(SimState& state, std::size_t index);
void anomaly_turn(SimState& state);
void dynamics_turn(SimState& state);

// Records a death, screams, and fires the global Climax when exactly two remain.
void kill_crew(SimState& state, std::size_t index, FateCause cause);

void ignite(SimState& state, Coord c, const std::string& actor);
bool flammable(TileKind kind);
bool can_see(const SimState& state, Coord from, Coord to);

// Runs until every crew member is dead, then removes the anomaly.
SimState run_station_sim(const StationBuild& build, WorldSeed seed, const GenConfig& config);

std::string event_to_json_line(const SimEvent& e);
std::string trace_json_lines(const SimState& state);
// One-paragraph state summary used in non-convergence diagnostics.
std::string diagnostic_dump(const SimState& state);

}  // namespace forensica
