#include "forensica/session.hpp"

#include <algorithm>
#include <cmath>

#include "forensica/error.hpp"
#include "forensica/wire.hpp"

namespace forensica {

using nlohmann::json;

namespace {

constexpr std::array<std::pair<const char*, Coord>, 8> kDirections{{{"n", {0, -1}},
                                                                    {"ne", {1, -1}},
                                                                    {"e", {1, 0}},
                                                                    {"se", {1, 1}},
                                                                    {"s", {0, 1}},
                                                                    {"sw", {-1, 1}},
                                                                    {"w", {-1, 0}},
                                                                    {"nw", {-1, -1}}}};

std::vector<Coord> sorted_diff(const std::set<Coord>& a, const std::set<Coord>& b) {
  std::vector<Coord> out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

Coord read_direction(const json& cmd) {
  if (cmd.contains("dir")) {
    if (!cmd["dir"].is_string()) throw Error(ErrorKind::Parse, "'dir' must be a direction name");
    auto d = direction_from_name(cmd["dir"].get<std::string>());
    if (!d) throw Error(ErrorKind::Parse, "unknown direction '" + cmd["dir"].get<std::string>() + "'");
    return *d;
  }
  if (cmd.contains("dx") && cmd.contains("dy") && cmd["dx"].is_number_integer() && cmd["dy"].is_number_integer()) {
    return {cmd["dx"].get<int>(), cmd["dy"].get<int>()};
  }
  throw Error(ErrorKind::Parse, "command needs 'dir' or integer 'dx'/'dy'");
}

Coord read_position(const json& cmd) {
  if (!cmd.contains("x") || !cmd.contains("y") || !cmd["x"].is_number_integer() || !cmd["y"].is_number_integer()) {
    throw Error(ErrorKind::Parse, "command needs integer 'x' and 'y'");
  }
  return {cmd["x"].get<int>(), cmd["y"].get<int>()};
}

json summary_json(const ExplorationSummary& s) {
  return json{{"tiles_seen", s.tiles_seen},
              {"objects_inspected", s.objects_inspected},
              {"terminals_read", s.terminals_read},
              {"turns", s.turns}};
}

json message_view(const Terminal& t) {
  return json{{"terminal", t.id},
              {"timestamp", t.message.timestamp},
              {"sender_name", t.message.sender_name},
              {"body", t.message.body},
              {"reply", t.message.reply}};
}

FateReport read_report(const json& cmd) {
  FateReport r;
  if (!cmd.contains("entries")) return r;
  const json& entries = cmd["entries"];
  if (!entries.is_object()) throw Error(ErrorKind::Parse, "'entries' must map body ids to claims");
  for (auto it = entries.begin(); it != entries.end(); ++it) {
    const json& e = it.value();
    if (!e.is_object() || !e.contains("name") || !e["name"].is_string() || !e.contains("cause") ||
        !e["cause"].is_string()) {
      throw Error(ErrorKind::Parse, "claim for '" + it.key() + "' needs string 'name' and 'cause'");
    }
    auto cause = fate_cause_from_name(e["cause"].get<std::string>());
    if (!cause) throw Error(ErrorKind::Parse, "unknown cause '" + e["cause"].get<std::string>() + "'");
    r.entries[it.key()] = FateClaim{e["name"].get<std::string>(), *cause};
  }
  return r;
}

void scan(const json& j, const std::string& path, std::vector<std::string>& out) {
  const auto& keys = sealed_keys();
  if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it) {
      const std::string p = path + "/" + it.key();
      if (std::find(keys.begin(), keys.end(), it.key()) != keys.end()) out.push_back(p);
      scan(it.value(), p, out);
    }
  } else if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i) scan(j[i], path + "/" + std::to_string(i), out);
  }
}

}  // namespace

std::string_view session_phase_name(SessionPhase p) {
  switch (p) {
    case SessionPhase::Exploring: return "exploring";
    case SessionPhase::Submitted: return "submitted";
    case SessionPhase::Ended: return "ended";
  }
  return "ended";
}

int score_report(const FateReport& report, const StationTruth& truth) {
  int score = 0;
  for (const auto& b : truth.bodies) {
    auto it = report.entries.find(b.body_id);
    if (it != report.entries.end() && it->second.name == b.name && it->second.cause == b.fate.cause) ++score;
  }
  return score;
}

bool in_torch_cone(Coord v, Coord f, int radius, int aperture_degrees) {
  if (v.x == 0 && v.y == 0) return true;
  const long long vv = 1LL * v.x * v.x + 1LL * v.y * v.y;
  if (vv > 1LL * radius * radius) return false;
  const long long ff = 1LL * f.x * f.x + 1LL * f.y * f.y;
  const long long dot = 1LL * v.x * f.x + 1LL * v.y * f.y;
  if (aperture_degrees >= 360) return true;
  if (aperture_degrees == 90) return dot >= 0 && 2 * dot * dot >= vv * ff;  // cos^2(45) = 1/2, exact
  const double half = aperture_degrees * 0.5 * 3.14159265358979323846 / 180.0;
  const double c = std::cos(half);
  const double lhs = static_cast<double>(dot);
  const double rhs = c * std::sqrt(static_cast<double>(vv) * static_cast<double>(ff));
  return lhs >= rhs - 1e-9;
}

std::optional<Coord> direction_from_name(std::string_view name) {
  for (const auto& [n, d] : kDirections) {
    if (name == n) return d;
  }
  return std::nullopt;
}

GameSession::GameSession(WorldBundle bundle, SessionConfig config, const GlyphTable& glyphs)
    : bundle_(std::move(bundle)), config_(config), glyphs_(glyphs) {
  if (bundle_.game == GameKind::Station && !bundle_.ground_truth) {
    throw Error(ErrorKind::IllegalState, "a station session needs the sealed section to score reports");
  }
  if (bundle_.game == GameKind::Station) areas_ = area_map(bundle_.station());
  player_ = bundle_.world.spawn;
  refresh();
}

const std::set<Coord>& GameSession::area_tiles(int area) const {
  auto it = area_cache_.find(area);
  if (it != area_cache_.end()) return it->second;
  const TileWorld& w = bundle_.world;
  std::set<Coord> tiles;
  if (area >= 0) {
    const Rect r = bundle_.rooms[static_cast<std::size_t>(area)].rect;
    for (int y = r.y; y < r.bottom(); ++y) {
      for (int x = r.x; x < r.right(); ++x) tiles.insert({x, y});
    }
  } else if (area != kNoArea) {
    // Corridors and the snowfield see their own tiles and the walls and doors
    // bounding them.
    for (int y = 0; y < w.height; ++y) {
      for (int x = 0; x < w.width; ++x) {
        const Coord c{x, y};
        if (areas_[w.index(c)] != area) continue;
        tiles.insert(c);
        for (Coord d : kNeighbours8) {
          const Coord n = c + d;
          if (!w.in_bounds(n)) continue;
          if (areas_[w.index(n)] == kNoArea || w.at(n).kind == TileKind::Door) tiles.insert(n);
        }
      }
    }
  }
  return area_cache_.emplace(area, std::move(tiles)).first->second;
}

std::set<Coord> GameSession::visible_tiles() const {
  const TileWorld& w = bundle_.world;
  std::set<Coord> out;
  if (bundle_.game == GameKind::Village) {
    const int r = config_.village_sight_radius;
    for (int dy = -r; dy <= r; ++dy) {
      for (int dx = -r; dx <= r; ++dx) {
        const Coord c = player_ + Coord{dx, dy};
        if (w.in_bounds(c) && dx * dx + dy * dy <= r * r) out.insert(c);
      }
    }
    return out;
  }
  std::vector<int> here;
  const int a = areas_[w.index(player_)];
  if (a != kNoArea) {
    here.push_back(a);
  } else {
    // Standing in a blown-out wall: look into whatever it joins.
    for (Coord d : kOrthogonal) {
      const Coord n = player_ + d;
      if (w.in_bounds(n) && areas_[w.index(n)] != kNoArea) here.push_back(areas_[w.index(n)]);
    }
  }
  out.insert(player_);
  for (int area : here) {
    for (Coord c : area_tiles(area)) {
      if (in_torch_cone(c - player_, facing_, config_.torch_radius, config_.torch_aperture_degrees)) out.insert(c);
    }
  }
  return out;
}

VisibilityDiff GameSession::refresh() {
  std::set<Coord> now = visible_tiles();
  VisibilityDiff d{sorted_diff(now, visible_), sorted_diff(visible_, now)};
  visible_ = std::move(now);
  discovered_.insert(visible_.begin(), visible_.end());
  return d;
}

void GameSession::require_active() const {
  if (phase_ == SessionPhase::Ended) throw Error(ErrorKind::IllegalState, "the session has ended");
}

MoveResult GameSession::move(Coord d) {
  require_active();
  if (std::abs(d.x) + std::abs(d.y) != 1) {
    throw Error(ErrorKind::Parse, "moves go one tile north, south, east or west");
  }
  const TileWorld& w = bundle_.world;
  MoveResult r;
  r.position = player_;
  const Coord target = player_ + d;
  ++turns_;
  if (!w.in_bounds(target)) {
    r.text = "You cannot go any further that way.";
    return r;
  }
  facing_ = d;
  const PlacedObject* blocker = nullptr;
  for (const PlacedObject* o : w.objects_at(target)) {
    if (o->blocking) blocker = o;
  }
  if (blocker || !tile_passable(w.at(target).kind)) {
    r.text = inspect_text(target);
    if (blocker) inspected_.insert(blocker->id);
    r.diff = refresh();
    return r;
  }
  player_ = target;
  r.moved = true;
  r.position = player_;
  r.diff = refresh();
  return r;
}

std::string GameSession::inspect_text(Coord c) const {
  const TileWorld& w = bundle_.world;
  const auto here = w.objects_at(c);
  const PlacedObject* top = nullptr;
  for (const PlacedObject* o : here) {
    if (!top || (o->blocking && !top->blocking)) top = o;
  }
  if (top && !top->description.empty()) return top->description;
  const TileCell& cell = w.at(c);
  std::string text;
  auto it = w.tile_descriptions.find(std::string(tile_name(cell.kind)));
  if (it != w.tile_descriptions.end()) text = it->second;
  if (cell.scorched) {
    auto s = w.tile_descriptions.find("scorched");
    if (s != w.tile_descriptions.end()) text += text.empty() ? s->second : " " + s->second;
  }
  return text;
}

VisibilityDiff GameSession::face(Coord d) {
  require_active();
  if (d.x == 0 && d.y == 0) throw Error(ErrorKind::Parse, "facing needs a non-zero direction");
  facing_ = d;
  return refresh();
}

std::string GameSession::inspect(Coord c) {
  require_active();
  if (!bundle_.world.in_bounds(c) || !visible_.count(c)) {
    throw Error(ErrorKind::OutOfReach, "that tile is not lit");
  }
  for (const PlacedObject* o : bundle_.world.objects_at(c)) inspected_.insert(o->id);
  return inspect_text(c);
}

const RadioMessage& GameSession::read_terminal(Coord c) {
  require_active();
  if (chebyshev(c, player_) > 1) throw Error(ErrorKind::OutOfReach, "the terminal is out of reach");
  for (const Terminal& t : bundle_.terminals) {
    if (t.position == c) {
      read_.insert(t.id);
      inspected_.insert(t.id);
      return t.message;
    }
  }
  throw Error(ErrorKind::NotFound, "there is no terminal there");
}

int GameSession::submit_report(const FateReport& report) {
  require_active();
  if (bundle_.game != GameKind::Station) throw Error(ErrorKind::IllegalState, "village worlds have no report");
  if (phase_ == SessionPhase::Submitted) throw Error(ErrorKind::IllegalState, "the report was already submitted");
  report_ = report;
  report_.score = score_report(report_, *bundle_.ground_truth->station);
  phase_ = SessionPhase::Submitted;
  return *report_.score;
}

ExplorationSummary GameSession::summary() const {
  return ExplorationSummary{static_cast<int>(discovered_.size()), static_cast<int>(inspected_.size()),
                            static_cast<int>(read_.size()), turns_};
}

ExplorationSummary GameSession::quit() {
  require_active();
  phase_ = SessionPhase::Ended;
  return summary();
}

const StationTruth& GameSession::revealed_truth() const {
  if (phase_ != SessionPhase::Submitted || !bundle_.ground_truth || !bundle_.ground_truth->station) {
    throw Error(ErrorKind::IllegalState, "the ground truth is sealed until a report is submitted");
  }
  return *bundle_.ground_truth->station;
}

json GameSession::tile_json(Coord c) const {
  const TileWorld& w = bundle_.world;
  const TileCell& cell = w.at(c);
  json objects = json::array();
  for (const PlacedObject* o : w.objects_at(c)) {
    objects.push_back(json{{"id", o->id},
                           {"kind", std::string(object_name(o->kind))},
                           {"glyph", glyphs_.object(o->kind)},
                           {"blocking", o->blocking},
                           {"description", o->description}});
  }
  return json{{"x", c.x},
              {"y", c.y},
              {"tile", std::string(tile_name(cell.kind))},
              {"glyph", glyphs_.tile(cell.kind)},
              {"scorched", cell.scorched},
              {"objects", objects}};
}

json GameSession::diff_json(const VisibilityDiff& d) const {
  json added = json::array();
  for (Coord c : d.added) added.push_back(tile_json(c));
  json removed = json::array();
  for (Coord c : d.removed) removed.push_back(coord_to_json(c));
  return json{{"added", added}, {"removed", removed}};
}

json GameSession::full_view() const {
  json visible = json::array();
  for (Coord c : visible_) visible.push_back(tile_json(c));
  json discovered = json::array();
  for (Coord c : discovered_) discovered.push_back(json::array({c.x, c.y}));
  json view{{"game", std::string(game_kind_name(bundle_.game))},
            {"seed", std::to_string(bundle_.seed.value)},
            {"width", bundle_.world.width},
            {"height", bundle_.world.height},
            {"player", coord_to_json(player_)},
            {"facing", json{{"dx", facing_.x}, {"dy", facing_.y}}},
            {"phase", std::string(session_phase_name(phase_))},
            {"visible", visible},
            {"discovered", discovered},
            {"read_terminals", read_},
            {"player_glyph", glyphs_.player}};
  if (report_.score) view["score"] = *report_.score;
  return view;
}

const std::vector<std::string>& sealed_keys() {
  static const std::vector<std::string> keys{"ground_truth", "fate",      "fates",   "cause",    "crew_id",
                                             "bodies",       "events",    "event_log", "sender", "symbol",
                                             "bindings",     "climax_turn", "sim_turns", "turn"};
  return keys;
}

std::vector<std::string> find_sealed_keys(const json& payload) {
  std::vector<std::string> out;
  scan(payload, "", out);
  return out;
}

json apply_command(GameSession& s, const json& cmd) {
  if (!cmd.is_object() || !cmd.contains("cmd") || !cmd["cmd"].is_string()) {
    throw Error(ErrorKind::Parse, "a command is an object with a string 'cmd'");
  }
  const std::string name = cmd["cmd"].get<std::string>();
  json out{{"cmd", name}, {"ok", true}};
  auto finish = [&](json diff) {
    out["diff"] = std::move(diff);
    out["player"] = coord_to_json(s.player());
    out["facing"] = json{{"dx", s.facing().x}, {"dy", s.facing().y}};
    out["phase"] = std::string(session_phase_name(s.phase()));
    return out;
  };
  const json no_diff{{"added", json::array()}, {"removed", json::array()}};
  if (name == "view" || name == "sync") {
    out["view"] = s.full_view();
    return finish(no_diff);
  }
  if (name == "move") {
    const MoveResult r = s.move(read_direction(cmd));
    out["moved"] = r.moved;
    if (!r.text.empty()) out["text"] = r.text;
    return finish(s.diff_json(r.diff));
  }
  if (name == "face") return finish(s.diff_json(s.face(read_direction(cmd))));
  if (name == "inspect") {
    out["text"] = s.inspect(read_position(cmd));
    return finish(no_diff);
  }
  if (name == "read") {
    const Coord c = read_position(cmd);
    s.read_terminal(c);
    for (const Terminal& t : s.bundle().terminals) {
      if (t.position == c) out["message"] = message_view(t);
    }
    return finish(no_diff);
  }
  if (name == "report") {
    out["score"] = s.submit_report(read_report(cmd));
    out["crew_size"] = static_cast<int>(s.revealed_truth().bodies.size());
    out["ground_truth"] = ground_truth_to_json(GroundTruth{std::nullopt, s.revealed_truth()});
    return finish(no_diff);
  }
  if (name == "quit") {
    out["summary"] = summary_json(s.quit());
    return finish(no_diff);
  }
  throw Error(ErrorKind::Parse, "unknown command '" + name + "'");
}

}  // namespace forensica
