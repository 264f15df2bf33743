#include "forensica/station_sim.hpp"

#include <algorithm>
#include <sstream>

#include "json.hpp"

#include "forensica/error.hpp"
#include "forensica/pathfinding.hpp"

namespace forensica {

namespace {

constexpr double kIdleWander = 0.2;

std::string crew_actor(int id) { return "crew-" + std::to_string(id); }

int log_event(SimState& s, std::string actor, EventKind kind, Coord at, int subject = -1, std::string detail = {}) {
  SimEvent e;
  e.turn = s.turn;
  e.seq = static_cast<int>(s.event_log.size());
  e.actor = std::move(actor);
  e.kind = kind;
  e.position = at;
  e.subject = subject;
  e.detail = std::move(detail);
  s.event_log.push_back(std::move(e));
  return s.event_log.back().seq;
}

int area_at(const SimState& s, Coord c) {
  const TileWorld& g = s.station().grid;
  return g.in_bounds(c) ? s.areas[g.index(c)] : kNoArea;
}

std::vector<std::uint8_t> crew_mask(const SimState& s) {
  std::vector<std::uint8_t> m = s.walkable;
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (s.burning[i]) m[i] = 0;
  }
  return m;
}

// Nearest walkable tile to `c` by Chebyshev ring, scanning rows then columns.
Coord nearest_open(const SimState& s, Coord c) {
  const TileWorld& g = s.station().grid;
  for (int r = 0; r <= 4; ++r) {
    for (int y = c.y - r; y <= c.y + r; ++y) {
      for (int x = c.x - r; x <= c.x + r; ++x) {
        const Coord t{x, y};
        if (chebyshev(t, c) != r || !g.in_bounds(t)) continue;
        if (s.walkable[g.index(t)]) return t;
      }
    }
  }
  return c;
}

Coord room_anchor(const SimState& s, std::size_t room) {
  const TileWorld& g = s.station().grid;
  const Rect in = s.station().rooms[room].interior();
  const Coord center = in.center();
  Coord best = center;
  int best_d = -1;
  for (int y = in.y; y < in.bottom(); ++y) {
    for (int x = in.x; x < in.right(); ++x) {
      const Coord t{x, y};
      if (!s.walkable[g.index(t)]) continue;
      const int d = manhattan(t, center);
      if (best_d < 0 || d < best_d) {
        best = t;
        best_d = d;
      }
    }
  }
  return best;
}

void deliver(SimState& s, Percept p, int except, Coord source, bool radius_limited) {
  const int r = s.config.sim.hearing_radius;
  for (auto& a : s.crew) {
    if (!a.alive || a.member.id == except) continue;
    if (radius_limited && dist2(a.position, source) > r * r) continue;
    a.inbox.push_back(p);
  }
}

void send_radio(SimState& s, std::size_t sender, MessageKind kind, const std::string& symbol,
                std::map<std::string, std::string> bindings, bool allow_reply = true) {
  CrewAgent& a = s.crew[sender];
  RadioMessage m;
  m.sender = a.member.id;
  m.sender_name = a.member.name;
  m.turn = s.turn;
  m.kind = kind;
  m.symbol = symbol;
  m.bindings = std::move(bindings);
  m.seq = log_event(s, crew_actor(a.member.id), EventKind::Radio, a.position, -1,
                    std::string(message_kind_name(kind)) + ":" + symbol);
  s.message_log.push_back(m);

  if (symbol == "report_anomaly") {
    Percept p{PerceptKind::ToldAnomaly, a.knowledge.anomaly_last_seen.value_or(a.position), -1};
    deliver(s, p, a.member.id, a.position, false);
  }
  if (symbol == "report_body" || symbol == "report_body_unknown") {
    auto it = m.bindings.find("SUBJECT_ID");
    const int subject = it == m.bindings.end() ? -1 : std::stoi(it->second);
    deliver(s, Percept{PerceptKind::ToldDeath, a.position, subject}, a.member.id, a.position, false);
  }

  // Someone else sometimes answers with where they are.
  if (!allow_reply || kind == MessageKind::Update) return;
  const bool answer = s.stream.chance(s.config.evidence.update_chance);
  std::vector<std::size_t> others;
  for (std::size_t i = 0; i < s.crew.size(); ++i) {
    if (i != sender && s.crew[i].alive) others.push_back(i);
  }
  if (!answer || others.empty()) return;
  const std::size_t who = others[s.stream.index(others.size())];
  send_radio(s, who, MessageKind::Update, "update_location",
             {{"ROOM", location_name(s.station(), s.crew[who].position)}}, false);
}

void set_act(SimState& s, std::size_t i, Act act) {
  CrewAgent& a = s.crew[i];
  if (static_cast<int>(act) <= static_cast<int>(a.act)) return;
  a.act = act;
  log_event(s, crew_actor(a.member.id), EventKind::ActChanged, a.position, -1, std::string(act_name(act)));
}

void set_plan(SimState& s, std::size_t i, PlanKind kind, Coord target) {
  CrewAgent& a = s.crew[i];
  if (a.plan.kind == kind && a.plan.target == target) return;
  a.plan = Plan{kind, target};
  a.path.clear();
  log_event(s, crew_actor(a.member.id), EventKind::PlanChanged, target, -1, std::string(plan_kind_name(kind)));
}

// Room far from `danger` that the agent does not already consider dangerous.
std::size_t choose_refuge(const SimState& s, const CrewAgent& a, Coord danger) {
  const TileWorld& g = s.station().grid;
  const auto dist = bfs_distances(g.width, g.height, s.walkable, nearest_open(s, danger));
  const auto danger_room = room_index_at(s.station(), danger);
  std::size_t best = 0;
  int best_score = -2;
  for (int pass = 0; pass < 2 && best_score < -1; ++pass) {
    for (std::size_t r = 0; r < s.station().rooms.size(); ++r) {
      if (danger_room && *danger_room == r) continue;
      if (pass == 0 && a.knowledge.danger_areas.count(static_cast<int>(r))) continue;
      const int d = dist[g.index(room_anchor(s, r))];
      if (d > best_score) {
        best = r;
        best_score = d;
      }
    }
  }
  return best;
}

void plan_refuge(SimState& s, std::size_t i, PlanKind kind, Coord danger) {
  CrewAgent& a = s.crew[i];
  const std::size_t room = choose_refuge(s, a, danger);
  const Coord target = room_anchor(s, room);
  const bool fresh = a.plan.kind != kind;
  set_plan(s, i, kind, target);
  if (!fresh) return;
  const std::string& label = s.station().rooms[room].label;
  if (kind == PlanKind::Flee) {
    send_radio(s, i, MessageKind::Intention, "intent_flee",
               {{"ROOM", location_name(s.station(), a.position)}, {"TARGET", label}});
  } else {
    send_radio(s, i, MessageKind::Intention, "intent_shelter", {{"TARGET", label}});
  }
}

void plan_meeting(SimState& s, std::size_t i) {
  CrewAgent& a = s.crew[i];
  const bool unsafe = s.meeting_room && a.knowledge.danger_areas.count(static_cast<int>(*s.meeting_room));
  if (!s.meeting_room || unsafe) {
    std::optional<std::size_t> pick;
    for (RoomKind k : {RoomKind::Residences, RoomKind::MessHall}) {
      const std::size_t r = room_index_of_kind(s.station(), k);
      if (!pick && !a.knowledge.danger_areas.count(static_cast<int>(r))) pick = r;
    }
    if (!pick) pick = choose_refuge(s, a, a.knowledge.anomaly_last_seen.value_or(a.position));
    s.meeting_room = pick;
    set_plan(s, i, PlanKind::Meet, room_anchor(s, *pick));
    send_radio(s, i, MessageKind::Intention, "intent_meet", {{"TARGET", s.station().rooms[*pick].label}});
    return;
  }
  set_plan(s, i, PlanKind::Meet, room_anchor(s, *s.meeting_room));
}

void choose_endgame(SimState& s, std::size_t i) {
  CrewAgent& a = s.crew[i];
  if (s.stream.chance(s.config.sim.confront_chance)) {
    const std::size_t office = room_index_of_kind(s.station(), RoomKind::SecurityOffice);
    set_plan(s, i, PlanKind::Armory, room_anchor(s, office));
    send_radio(s, i, MessageKind::Intention, "intent_armory", {});
  } else {
    const Coord door = s.station().entrance_door;
    Coord outside = door;
    for (Coord d : kOrthogonal) {
      const Coord n = door + d;
      if (s.station().grid.in_bounds(n) && s.station().grid.at(n).kind == TileKind::Exterior) outside = n;
    }
    set_plan(s, i, PlanKind::Outside, outside);
    send_radio(s, i, MessageKind::Intention, "intent_outside", {});
  }
  (void)a;
}

void trigger_climax(SimState& s) {
  s.climax_triggered = true;
  s.climax_turn = s.turn;
  log_event(s, "station", EventKind::ClimaxTriggered, {}, -1, "two crew remain");
  for (std::size_t i = 0; i < s.crew.size(); ++i) {
    if (!s.crew[i].alive) continue;
    set_act(s, i, Act::Climax);
    choose_endgame(s, i);
  }
}

// One step toward `target`, reusing the cached route while it stays valid.
void step_toward(SimState& s, std::vector<Coord>& path, Coord& position, Coord target,
                 const std::vector<std::uint8_t>& mask, const std::vector<Coord>& forbidden) {
  const TileWorld& g = s.station().grid;
  if (position == target) return;
  const bool stale = path.empty() || path.back() != target || !mask[g.index(path.front())] ||
                     chebyshev(path.front(), position) != 1;
  if (stale) path = find_path(g.width, g.height, mask, position, target);
  if (path.empty()) return;
  if (std::find(forbidden.begin(), forbidden.end(), path.front()) != forbidden.end()) return;
  position = path.front();
  path.erase(path.begin());
}

void shoot(SimState& s, std::size_t i) {
  CrewAgent& a = s.crew[i];
  log_event(s, crew_actor(a.member.id), EventKind::Shot, a.position, -1, "anomaly");
  s.anomaly.shot_by = a.member.id;
  deliver(s, Percept{PerceptKind::Gunshot, a.position, -1}, a.member.id, a.position, true);
  send_radio(s, i, MessageKind::Report, "report_shot", {{"ROOM", location_name(s.station(), a.position)}});
}

void explode(SimState& s, std::size_t barrel) {
  DynamicObject& b = s.dynamics[barrel];
  if (b.state != 0) return;
  b.state = 1;
  const Coord at = b.position;
  TileWorld& g = s.station().grid;
  for (auto& o : g.objects) {
    if (o.position == at && o.kind == ObjectKind::FuelBarrel) {
      o.kind = ObjectKind::Debris;
      o.blocking = false;
      o.description_key = "debris";
      o.description.clear();
    }
  }
  s.walkable = g.passable_mask();
  log_event(s, "barrel", EventKind::Exploded, at);
  deliver(s, Percept{PerceptKind::Explosion, at, -1}, -1, at, true);

  const int r = s.config.sim.explosion_radius;
  for (int y = at.y - r; y <= at.y + r; ++y) {
    for (int x = at.x - r; x <= at.x + r; ++x) {
      const Coord t{x, y};
      if (!g.in_bounds(t) || g.at(t).kind != TileKind::Wall) continue;
      g.at(t).kind = TileKind::Rubble;
      s.walkable[g.index(t)] = 1;
      log_event(s, "barrel", EventKind::WallDestroyed, t);
    }
  }
  for (std::size_t i = 0; i < s.crew.size(); ++i) {
    if (s.crew[i].alive && chebyshev(s.crew[i].position, at) <= r) kill_crew(s, i, FateCause::Explosion);
  }
  for (int y = at.y - r; y <= at.y + r; ++y) {
    for (int x = at.x - r; x <= at.x + r; ++x) ignite(s, {x, y}, "barrel");
  }
}

void handle_percepts(SimState& s, std::size_t i) {
  const StationSimConfig& cfg = s.config.sim;
  std::vector<Percept> inbox;
  inbox.swap(s.crew[i].inbox);
  for (const Percept& p : inbox) {
    CrewAgent& a = s.crew[i];
    switch (p.kind) {
      case PerceptKind::Scream:
      case PerceptKind::Explosion:
      case PerceptKind::Gunshot: {
        const char* what = p.kind == PerceptKind::Scream ? "scream" : p.kind == PerceptKind::Explosion ? "explosion" : "gunshot";
        a.panic += p.kind == PerceptKind::Scream      ? cfg.panic_hear_scream
                   : p.kind == PerceptKind::Explosion ? cfg.panic_hear_explosion
                                                      : cfg.panic_hear_gunshot;
        log_event(s, crew_actor(a.member.id), EventKind::Heard, p.position, -1, what);
        if (a.act == Act::Opening && a.member.profession == Profession::SecurityOfficer &&
            plan_urgency(a.plan.kind) < plan_urgency(PlanKind::Investigate)) {
          set_plan(s, i, PlanKind::Investigate, nearest_open(s, p.position));
          send_radio(s, i, MessageKind::Intention, "intent_investigate",
                     {{"ROOM", location_name(s.station(), p.position)}});
        }
        break;
      }
      case PerceptKind::ToldAnomaly:
        a.knowledge.anomaly_known = true;
        a.knowledge.anomaly_last_seen = p.position;
        a.knowledge.danger_areas.insert(area_at(s, p.position));
        a.panic += cfg.panic_told_anomaly;
        set_act(s, i, Act::Panic);
        if (plan_urgency(s.crew[i].plan.kind) < plan_urgency(PlanKind::Flee)) plan_refuge(s, i, PlanKind::Flee, p.position);
        break;
      case PerceptKind::ToldDeath:
        if (p.subject >= 0) a.knowledge.known_deaths.insert(p.subject);
        a.panic += cfg.panic_told_death;
        break;
    }
  }
}

// Sight checks. Returns true when the agent should shoot this turn.
bool look_around(SimState& s, std::size_t i) {
  const StationSimConfig& cfg = s.config.sim;
  bool fire_shot = false;
  {
    CrewAgent& a = s.crew[i];
    const bool sees = s.anomaly.present && can_see(s, a.position, s.anomaly.position);
    if (sees) {
      const bool fresh = !a.saw_anomaly_last_turn;
      a.knowledge.anomaly_known = true;
      a.knowledge.anomaly_last_seen = s.anomaly.position;
      a.knowledge.danger_areas.insert(area_at(s, s.anomaly.position));
      if (fresh) {
        log_event(s, crew_actor(a.member.id), EventKind::Sighted, s.anomaly.position, -1, "anomaly");
        a.panic += cfg.panic_see_anomaly;
        a.sighting_to_radio = true;
      }
      set_act(s, i, Act::Panic);
      const PlanKind k = s.crew[i].plan.kind;
      const bool endgame = k == PlanKind::Armory || k == PlanKind::Confront || k == PlanKind::Outside;
      if (!endgame) {
        const bool in_range = chebyshev(s.crew[i].position, s.anomaly.position) <= cfg.shot_range;
        if (fresh && s.crew[i].armed && in_range) fire_shot = true;
        plan_refuge(s, i, PlanKind::Flee, s.anomaly.position);
      }
    }
    s.crew[i].saw_anomaly_last_turn = sees;
  }
  for (std::size_t j = 0; j < s.crew.size(); ++j) {
    const CrewAgent& dead = s.crew[j];
    if (dead.alive || !dead.fate) continue;
    if (s.crew[i].knowledge.known_deaths.count(dead.member.id)) {
      // Already told; still worth a look, but no new report.
      continue;
    }
    if (!can_see(s, s.crew[i].position, dead.fate->position)) continue;
    CrewAgent& a = s.crew[i];
    a.knowledge.known_deaths.insert(dead.member.id);
    a.knowledge.danger_areas.insert(area_at(s, dead.fate->position));
    a.panic += cfg.panic_see_body;
    log_event(s, crew_actor(a.member.id), EventKind::Sighted, dead.fate->position, dead.member.id, "body");
    const bool recognisable = dead.fate->cause == FateCause::Exposure || dead.fate->cause == FateCause::BurnedByAnomaly;
    std::map<std::string, std::string> b{{"ROOM", location_name(s.station(), dead.fate->position)},
                                         {"SUBJECT_ID", std::to_string(dead.member.id)}};
    if (recognisable) b["SUBJECT"] = dead.member.name;
    send_radio(s, i, MessageKind::Report, recognisable ? "report_body" : "report_body_unknown", b);
    if (plan_urgency(s.crew[i].plan.kind) < plan_urgency(PlanKind::Meet)) plan_meeting(s, i);
  }
  for (const DynamicObject& d : s.dynamics) {
    if (d.kind != DynamicKind::Fire) continue;
    CrewAgent& a = s.crew[i];
    const int area = area_at(s, d.position);
    if (a.knowledge.fire_areas.count(area) || !can_see(s, a.position, d.position)) continue;
    a.knowledge.fire_areas.insert(area);
    a.knowledge.danger_areas.insert(area);
    a.panic += cfg.panic_see_fire;
    const Coord where = d.position;
    log_event(s, crew_actor(a.member.id), EventKind::Sighted, where, -1, "fire");
    send_radio(s, i, MessageKind::Report, "report_fire", {{"ROOM", location_name(s.station(), where)}});
    if (plan_urgency(s.crew[i].plan.kind) < plan_urgency(PlanKind::Shelter)) plan_refuge(s, i, PlanKind::Shelter, where);
    break;
  }
  return fire_shot;
}

void act_on_plan(SimState& s, std::size_t i, bool fire_shot) {
  const StationSimConfig& cfg = s.config.sim;
  const TileWorld& g = s.station().grid;
  if (fire_shot) {
    shoot(s, i);
    return;
  }
  CrewAgent& a = s.crew[i];
  const auto mask = crew_mask(s);
  std::vector<Coord> anomaly_tile;
  if (s.anomaly.present) anomaly_tile.push_back(s.anomaly.position);
  switch (a.plan.kind) {
    case PlanKind::Confront: {
      if (s.anomaly.present && can_see(s, a.position, s.anomaly.position) &&
          chebyshev(a.position, s.anomaly.position) <= cfg.shot_range) {
        shoot(s, i);
        return;
      }
      a.plan.target = s.anomaly.position;
      auto m = mask;
      m[g.index(s.anomaly.position)] = 1;
      step_toward(s, a.path, a.position, s.anomaly.position, m, anomaly_tile);
      break;
    }
    case PlanKind::Armory:
      step_toward(s, a.path, a.position, a.plan.target, mask, anomaly_tile);
      if (a.position == a.plan.target) {
        a.armed = true;
        set_plan(s, i, PlanKind::Confront, s.anomaly.position);
      }
      break;
    case PlanKind::Outside: {
      if (g.at(a.position).kind == TileKind::Exterior) {
        // Keep walking away from the station.
        Coord best = a.position;
        int best_d = manhattan(a.position, s.station().entrance_door);
        for (Coord d : kOrthogonal) {
          const Coord n = a.position + d;
          if (!g.in_bounds(n) || !mask[g.index(n)] || g.at(n).kind != TileKind::Exterior) continue;
          const int nd = manhattan(n, s.station().entrance_door);
          if (nd > best_d) {
            best = n;
            best_d = nd;
          }
        }
        a.position = best;
      } else {
        step_toward(s, a.path, a.position, a.plan.target, mask, anomaly_tile);
      }
      break;
    }
    case PlanKind::Investigate:
    case PlanKind::Shelter:
    case PlanKind::Meet:
    case PlanKind::Flee:
      step_toward(s, a.path, a.position, a.plan.target, mask, anomaly_tile);
      if (a.position == a.plan.target) set_plan(s, i, PlanKind::Idle, a.position);
      break;
    case PlanKind::Idle: {
      const bool wander = s.stream.chance(kIdleWander);
      if (!wander || a.act != Act::Opening) break;
      const Coord n = a.position + kOrthogonal[s.stream.index(kOrthogonal.size())];
      if (g.in_bounds(n) && mask[g.index(n)] && area_at(s, n) == area_at(s, a.position) &&
          std::find(anomaly_tile.begin(), anomaly_tile.end(), n) == anomaly_tile.end()) {
        a.position = n;
      }
      break;
    }
  }
}

}  // namespace

std::string_view fate_cause_name(FateCause c) {
  switch (c) {
    case FateCause::BurnedByAnomaly: return "BurnedByAnomaly";
    case FateCause::Fire: return "Fire";
    case FateCause::Exposure: return "Exposure";
    case FateCause::Explosion: return "Explosion";
  }
  return "Fire";
}

std::optional<FateCause> fate_cause_from_name(std::string_view name) {
  for (FateCause c : kAllCauses) {
    if (fate_cause_name(c) == name) return c;
  }
  return std::nullopt;
}

std::string_view act_name(Act a) {
  switch (a) {
    case Act::Opening: return "Opening";
    case Act::Panic: return "Panic";
    case Act::Climax: return "Climax";
  }
  return "Opening";
}

std::string_view plan_kind_name(PlanKind p) {
  switch (p) {
    case PlanKind::Idle: return "Idle";
    case PlanKind::Investigate: return "Investigate";
    case PlanKind::Shelter: return "Shelter";
    case PlanKind::Meet: return "Meet";
    case PlanKind::Flee: return "Flee";
    case PlanKind::Armory: return "Armory";
    case PlanKind::Confront: return "Confront";
    case PlanKind::Outside: return "Outside";
  }
  return "Idle";
}

std::string_view message_kind_name(MessageKind k) {
  switch (k) {
    case MessageKind::Report: return "Report";
    case MessageKind::Intention: return "Intention";
    case MessageKind::Update: return "Update";
  }
  return "Report";
}

std::optional<MessageKind> message_kind_from_name(std::string_view name) {
  for (MessageKind k : {MessageKind::Report, MessageKind::Intention, MessageKind::Update}) {
    if (message_kind_name(k) == name) return k;
  }
  return std::nullopt;
}

std::string_view event_kind_name(EventKind k) {
  switch (k) {
    case EventKind::SimStart: return "sim-start";
    case EventKind::Sighted: return "sighted";
    case EventKind::Heard: return "heard";
    case EventKind::Radio: return "radio";
    case EventKind::PlanChanged: return "plan";
    case EventKind::ActChanged: return "act";
    case EventKind::ClimaxTriggered: return "climax";
    case EventKind::Shot: return "shot";
    case EventKind::Retarget: return "retarget";
    case EventKind::Hint: return "hint";
    case EventKind::Ignited: return "ignited";
    case EventKind::Exploded: return "exploded";
    case EventKind::WallDestroyed: return "wall-destroyed";
    case EventKind::Death: return "death";
    case EventKind::Exited: return "exited";
    case EventKind::SimEnd: return "sim-end";
  }
  return "sim-start";
}

int plan_urgency(PlanKind p) {
  switch (p) {
    case PlanKind::Idle: return 0;
    case PlanKind::Investigate: return 1;
    case PlanKind::Shelter: return 2;
    case PlanKind::Meet: return 3;
    case PlanKind::Flee: return 4;
    case PlanKind::Armory:
    case PlanKind::Confront:
    case PlanKind::Outside: return 5;
  }
  return 0;
}

int SimState::alive_count() const {
  return static_cast<int>(std::count_if(crew.begin(), crew.end(), [](const CrewAgent& a) { return a.alive; }));
}

bool flammable(TileKind kind) { return kind == TileKind::Floor || kind == TileKind::Door || kind == TileKind::Rubble; }

bool can_see(const SimState& s, Coord from, Coord to) {
  const int d = chebyshev(from, to);
  if (d <= 1) return true;
  if (d > s.config.sim.sight_radius) return false;
  const int a = area_at(s, from);
  return a != kNoArea && a == area_at(s, to);
}

SimState init_sim(const StationBuild& build, WorldSeed seed, const GenConfig& config) {
  SimState s;
  s.build = build;
  s.config = config;
  s.areas = area_map(build.station);
  const TileWorld& g = build.station.grid;
  s.burning.assign(g.tiles.size(), 0);
  s.walkable = g.passable_mask();
  s.stream = derive_stream(seed, "station.sim");
  for (const CrewMember& m : build.crew) {
    CrewAgent a;
    a.member = m;
    a.position = m.start_position;
    a.plan = Plan{PlanKind::Idle, m.start_position};
    a.armed = m.profession == Profession::SecurityOfficer;
    s.crew.push_back(std::move(a));
  }
  s.anomaly.position = build.anomaly.position;
  for (const auto& o : g.objects) {
    if (o.kind == ObjectKind::FuelBarrel) s.dynamics.push_back({DynamicKind::FuelBarrel, o.position, 0});
  }
  log_event(s, "station", EventKind::SimStart, build.anomaly.position);
  return s;
}

void ignite(SimState& s, Coord c, const std::string& actor) {
  TileWorld& g = s.station().grid;
  if (!g.in_bounds(c) || !flammable(g.at(c).kind)) return;
  const std::size_t k = g.index(c);
  if (s.burning[k]) return;
  s.burning[k] = 1;
  g.at(c).scorched = true;
  s.dynamics.push_back({DynamicKind::Fire, c, 0});
  log_event(s, actor, EventKind::Ignited, c);
  for (std::size_t b = 0; b < s.dynamics.size(); ++b) {
    if (s.dynamics[b].kind == DynamicKind::FuelBarrel && s.dynamics[b].position == c && s.dynamics[b].state == 0) {
      explode(s, b);
    }
  }
}

void kill_crew(SimState& s, std::size_t i, FateCause cause) {
  CrewAgent& a = s.crew[i];
  if (!a.alive) return;
  a.alive = false;
  a.fate = FateRecord{cause, s.turn, a.position};
  a.inbox.clear();
  a.path.clear();
  log_event(s, crew_actor(a.member.id), EventKind::Death, a.position, a.member.id, std::string(fate_cause_name(cause)));
  deliver(s, Percept{PerceptKind::Scream, a.position, a.member.id}, a.member.id, a.position, true);
  if (!s.climax_triggered && s.alive_count() == 2) trigger_climax(s);
}

void crew_turn(SimState& s, std::size_t i) {
  if (!s.crew[i].alive) return;
  if (s.crew[i].sighting_to_radio) {
    s.crew[i].sighting_to_radio = false;
    const Coord seen = s.crew[i].knowledge.anomaly_last_seen.value_or(s.crew[i].position);
    send_radio(s, i, MessageKind::Report, "report_anomaly", {{"ROOM", location_name(s.station(), seen)}});
  }
  handle_percepts(s, i);
  const bool fire_shot = look_around(s, i);

  const StationSimConfig& cfg = s.config.sim;
  if (s.crew[i].panic >= cfg.alert_threshold) set_act(s, i, Act::Panic);
  if (s.crew[i].panic >= cfg.shelter_threshold && plan_urgency(s.crew[i].plan.kind) < plan_urgency(PlanKind::Meet)) {
    plan_meeting(s, i);
  }

  const bool was_outside = s.station().grid.at(s.crew[i].position).kind == TileKind::Exterior;
  act_on_plan(s, i, fire_shot);

  CrewAgent& a = s.crew[i];
  if (s.station().grid.at(a.position).kind == TileKind::Exterior) {
    if (!was_outside) log_event(s, crew_actor(a.member.id), EventKind::Exited, a.position);
    ++a.turns_outside;
    if (a.turns_outside > cfg.exposure_turns) {
      kill_crew(s, i, FateCause::Exposure);
      return;
    }
  } else {
    a.turns_outside = 0;
  }
  a.panic = std::max(0.0, a.panic - cfg.panic_decay);
}

void anomaly_turn(SimState& s) {
  AnomalyAgent& an = s.anomaly;
  if (!an.present || s.alive_count() == 0) return;
  const StationSimConfig& cfg = s.config.sim;

  if (an.shot_by) {
    const int shooter = *an.shot_by;
    an.shot_by.reset();
    const std::size_t si = static_cast<std::size_t>(shooter);
    if (s.crew[si].alive) {
      an.target = shooter;
      an.waypoint = s.crew[si].position;
      an.turns_since_seen_target = 0;
      an.path.clear();
      log_event(s, "anomaly", EventKind::Retarget, an.position, shooter, "shot");
    }
    const int r = cfg.shot_burst_radius;
    const Coord at = an.position;
    for (int y = at.y - r; y <= at.y + r; ++y) {
      for (int x = at.x - r; x <= at.x + r; ++x) ignite(s, {x, y}, "anomaly");
    }
  }

  // Kill an adjacent human, preferring the current target.
  std::optional<std::size_t> victim;
  for (std::size_t i = 0; i < s.crew.size(); ++i) {
    if (!s.crew[i].alive || chebyshev(s.crew[i].position, an.position) > 1) continue;
    if (!victim || (an.target && s.crew[i].member.id == *an.target)) victim = i;
  }
  if (victim) {
    if (an.target && *an.target == s.crew[*victim].member.id) an.target.reset();
    kill_crew(s, *victim, FateCause::BurnedByAnomaly);
    ignite(s, s.crew[*victim].fate->position, "anomaly");
    return;
  }

  if (an.target && !s.crew[static_cast<std::size_t>(*an.target)].alive) an.target.reset();
  bool sees_target = an.target && can_see(s, an.position, s.crew[static_cast<std::size_t>(*an.target)].position);
  if (!an.target) {
    std::optional<std::size_t> best;
    for (std::size_t i = 0; i < s.crew.size(); ++i) {
      if (!s.crew[i].alive || !can_see(s, an.position, s.crew[i].position)) continue;
      if (!best || dist2(s.crew[i].position, an.position) < dist2(s.crew[*best].position, an.position)) best = i;
    }
    if (best) {
      an.target = s.crew[*best].member.id;
      sees_target = true;
      log_event(s, "anomaly", EventKind::Retarget, an.position, *an.target, "sighted");
    }
  }
  if (sees_target) {
    an.waypoint = s.crew[static_cast<std::size_t>(*an.target)].position;
    an.turns_since_seen_target = 0;
  } else {
    ++an.turns_since_seen_target;
    if (an.waypoint && *an.waypoint == an.position) {
      an.target.reset();
      an.waypoint.reset();
    }
    if (an.turns_since_seen_target > cfg.anomaly_patience) {
      std::vector<std::size_t> living;
      for (std::size_t i = 0; i < s.crew.size(); ++i) {
        if (s.crew[i].alive) living.push_back(i);
      }
      const std::size_t pick = living[s.stream.index(living.size())];
      an.target = s.crew[pick].member.id;
      an.waypoint = s.crew[pick].position;
      an.turns_since_seen_target = 0;
      log_event(s, "anomaly", EventKind::Hint, s.crew[pick].position, an.target.value());
    }
  }

  if (an.waypoint) {
    auto mask = s.walkable;
    std::vector<Coord> humans;
    for (const auto& a : s.crew) {
      if (!a.alive) continue;
      mask[s.station().grid.index(a.position)] = 1;
      humans.push_back(a.position);
    }
    step_toward(s, an.path, an.position, *an.waypoint, mask, humans);
  }

  if (s.stream.chance(cfg.anomaly_self_ignite)) ignite(s, an.position, "anomaly");
}

void dynamics_turn(SimState& s) {
  const StationSimConfig& cfg = s.config.sim;
  TileWorld& g = s.station().grid;
  std::vector<std::size_t> fires;
  for (std::size_t k = 0; k < s.dynamics.size(); ++k) {
    if (s.dynamics[k].kind == DynamicKind::Fire) fires.push_back(k);
  }
  std::vector<Coord> sources;
  for (std::size_t k : fires) sources.push_back(s.dynamics[k].position);
  for (Coord c : sources) {
    const auto spread = [&](Coord d) {
      const Coord n = c + d;
      if (!g.in_bounds(n) || !flammable(g.at(n).kind) || s.burning[g.index(n)]) return;
      if (s.stream.chance(cfg.fire_spread)) ignite(s, n, "fire");
    };
    if (cfg.fire_spreads_diagonally) {
      for (Coord d : kNeighbours8) spread(d);
    } else {
      for (Coord d : kOrthogonal) spread(d);
    }
  }
  // Burn-out for fires that existed at the start of the phase.
  std::vector<std::uint8_t> out(s.dynamics.size(), 0);
  for (std::size_t k : fires) {
    ++s.dynamics[k].state;
    if (s.stream.chance(cfg.fire_burnout)) {
      out[k] = 1;
      s.burning[g.index(s.dynamics[k].position)] = 0;
    }
  }
  std::vector<DynamicObject> kept;
  kept.reserve(s.dynamics.size());
  for (std::size_t k = 0; k < s.dynamics.size(); ++k) {
    if (!out[k]) kept.push_back(s.dynamics[k]);
  }
  s.dynamics = std::move(kept);

  for (std::size_t i = 0; i < s.crew.size(); ++i) {
    if (s.crew[i].alive && s.burning[g.index(s.crew[i].position)]) kill_crew(s, i, FateCause::Fire);
  }
}

void step_sim(SimState& s) {
  if (s.alive_count() == 0) throw Error(ErrorKind::IllegalState, "simulation already finished");
  if (s.turn >= s.config.sim.tick_cap) {
    throw Error(ErrorKind::NonConvergence,
                "station simulation hit the tick cap of " + std::to_string(s.config.sim.tick_cap) + "; " +
                    diagnostic_dump(s));
  }
  for (std::size_t i = 0; i < s.crew.size(); ++i) crew_turn(s, i);
  anomaly_turn(s);
  dynamics_turn(s);
  ++s.turn;
}

SimState run_station_sim(const StationBuild& build, WorldSeed seed, const GenConfig& config) {
  SimState s = init_sim(build, seed, config);
  while (s.alive_count() > 0) step_sim(s);
  s.anomaly.present = false;
  log_event(s, "station", EventKind::SimEnd, s.anomaly.position);
  return s;
}

std::string event_to_json_line(const SimEvent& e) {
  nlohmann::json j;
  j["turn"] = e.turn;
  j["seq"] = e.seq;
  j["actor"] = e.actor;
  j["kind"] = std::string(event_kind_name(e.kind));
  j["x"] = e.position.x;
  j["y"] = e.position.y;
  if (e.subject >= 0) j["subject"] = e.subject;
  if (!e.detail.empty()) j["detail"] = e.detail;
  return j.dump();
}

std::string trace_json_lines(const SimState& s) {
  std::string out;
  for (const auto& e : s.event_log) {
    out += event_to_json_line(e);
    out += '\n';
  }
  return out;
}

std::string diagnostic_dump(const SimState& s) {
  std::ostringstream os;
  os << "turn " << s.turn << ", anomaly at (" << s.anomaly.position.x << "," << s.anomaly.position.y << ")";
  if (s.anomaly.target) os << " targeting crew-" << *s.anomaly.target;
  os << ", " << s.dynamics.size() << " dynamic objects";
  for (const auto& a : s.crew) {
    os << "; crew-" << a.member.id << (a.alive ? " alive" : " dead") << " at (" << a.position.x << ","
       << a.position.y << ") act " << act_name(a.act) << " plan " << plan_kind_name(a.plan.kind);
  }
  return os.str();
}

}  // namespace forensica
