#include "forensica/wire.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "forensica/error.hpp"

namespace forensica {

using nlohmann::json;

namespace {

// Read-side cursor that remembers its JSON-pointer path for error messages.
class Node {
 public:
  Node(const json& j, std::string path) : j_(j), path_(std::move(path)) {}

  const std::string& path() const { return path_; }
  const json& raw() const { return j_; }

  Node at(const std::string& key) const {
    if (!j_.is_object()) fail("expected an object");
    auto it = j_.find(key);
    if (it == j_.end()) throw CorruptWorldError(path_ + "/" + key, "missing field");
    return Node(*it, path_ + "/" + key);
  }
  std::optional<Node> find(const std::string& key) const {
    if (!j_.is_object()) fail("expected an object");
    auto it = j_.find(key);
    if (it == j_.end() || it->is_null()) return std::nullopt;
    return Node(*it, path_ + "/" + key);
  }
  std::size_t size() const {
    if (!j_.is_array()) fail("expected an array");
    return j_.size();
  }
  Node operator[](std::size_t i) const { return Node(j_.at(i), path_ + "/" + std::to_string(i)); }
  int as_int() const {
    if (!j_.is_number_integer()) fail("expected an integer");
    return j_.get<int>();
  }
  double as_double() const {
    if (!j_.is_number()) fail("expected a number");
    return j_.get<double>();
  }
  bool as_bool() const {
    if (!j_.is_boolean()) fail("expected a boolean");
    return j_.get<bool>();
  }
  std::string as_string() const {
    if (!j_.is_string()) fail("expected a string");
    return j_.get<std::string>();
  }
  [[noreturn]] void fail(const std::string& what) const { throw CorruptWorldError(path_, what); }

 private:
  const json& j_;
  std::string path_;
};

Coord read_coord(const Node& n) { return {n.at("x").as_int(), n.at("y").as_int()}; }

json rect_json(const Rect& r) { return json{{"x", r.x}, {"y", r.y}, {"w", r.w}, {"h", r.h}}; }
Rect read_rect(const Node& n) {
  Rect r{n.at("x").as_int(), n.at("y").as_int(), n.at("w").as_int(), n.at("h").as_int()};
  if (r.w <= 0 || r.h <= 0) n.fail("rectangle must have positive size");
  return r;
}

PlacedObject read_object(const Node& n) {
  PlacedObject o;
  o.id = n.at("id").as_string();
  o.position = read_coord(n);
  const std::string kind = n.at("kind").as_string();
  auto k = object_from_name(kind);
  if (!k) n.at("kind").fail("unknown object kind '" + kind + "'");
  o.kind = *k;
  o.description_key = n.at("description_key").as_string();
  o.description = n.at("description").as_string();
  o.blocking = n.at("blocking").as_bool();
  if (auto attrs = n.find("attributes")) {
    if (!attrs->raw().is_object()) attrs->fail("expected an object");
    for (auto it = attrs->raw().begin(); it != attrs->raw().end(); ++it) {
      if (!it->is_number_integer()) Node(*it, attrs->path() + "/" + it.key()).fail("expected an integer");
      o.attributes[it.key()] = it->get<std::int64_t>();
    }
  }
  return o;
}

TileWorld read_tile_world(const Node& n) {
  TileWorld w;
  w.width = n.at("width").as_int();
  w.height = n.at("height").as_int();
  if (w.width <= 0 || w.height <= 0 || w.width > 4096 || w.height > 4096) n.fail("bad dimensions");
  w.tiles.assign(static_cast<std::size_t>(w.width) * w.height, TileCell{});
  const Node rows = n.at("tiles");
  if (rows.size() != static_cast<std::size_t>(w.height)) rows.fail("expected one row per grid line");
  const Node burnt = n.at("scorched");
  if (burnt.size() != static_cast<std::size_t>(w.height)) burnt.fail("expected one row per grid line");
  for (int y = 0; y < w.height; ++y) {
    const std::string row = rows[static_cast<std::size_t>(y)].as_string();
    const std::string marks = burnt[static_cast<std::size_t>(y)].as_string();
    if (static_cast<int>(row.size()) != w.width) rows[static_cast<std::size_t>(y)].fail("row has the wrong width");
    if (static_cast<int>(marks.size()) != w.width) burnt[static_cast<std::size_t>(y)].fail("row has the wrong width");
    for (int x = 0; x < w.width; ++x) {
      auto k = tile_from_code(row[static_cast<std::size_t>(x)]);
      if (!k) rows[static_cast<std::size_t>(y)].fail("unknown tile code at column " + std::to_string(x));
      w.at({x, y}).kind = *k;
      const char m = marks[static_cast<std::size_t>(x)];
      if (m != '.' && m != 'x') burnt[static_cast<std::size_t>(y)].fail("expected '.' or 'x'");
      w.at({x, y}).scorched = m == 'x';
    }
  }
  const Node objects = n.at("objects");
  for (std::size_t i = 0; i < objects.size(); ++i) w.objects.push_back(read_object(objects[i]));
  w.spawn = read_coord(n.at("spawn"));
  const Node regions = n.at("regions");
  for (std::size_t i = 0; i < regions.size(); ++i) w.regions.push_back(regions[i].as_string());
  const Node text = n.at("tile_descriptions");
  if (!text.raw().is_object()) text.fail("expected an object");
  for (auto it = text.raw().begin(); it != text.raw().end(); ++it) {
    w.tile_descriptions[it.key()] = Node(*it, text.path() + "/" + it.key()).as_string();
  }
  return w;
}

RadioMessage read_message(const Node& n) {
  RadioMessage m;
  m.sender = n.at("sender").as_int();
  m.sender_name = n.at("sender_name").as_string();
  m.turn = n.at("turn").as_int();
  m.seq = n.at("seq").as_int();
  const std::string kind = n.at("kind").as_string();
  auto k = message_kind_from_name(kind);
  if (!k) n.at("kind").fail("unknown message kind '" + kind + "'");
  m.kind = *k;
  m.timestamp = n.at("timestamp").as_string();
  m.body = n.at("body").as_string();
  m.reply = n.at("reply").as_string();
  if (auto s = n.find("symbol")) m.symbol = s->as_string();
  if (auto b = n.find("bindings")) {
    for (auto it = b->raw().begin(); it != b->raw().end(); ++it) {
      m.bindings[it.key()] = Node(*it, b->path() + "/" + it.key()).as_string();
    }
  }
  return m;
}

GroundTruth read_truth(const Node& n) {
  GroundTruth t;
  if (auto v = n.find("village")) {
    VillageTruth vt;
    const std::string ending = v->at("ending").as_string();
    auto e = ending_from_name(ending);
    if (!e) v->at("ending").fail("unknown ending '" + ending + "'");
    vt.ending = *e;
    vt.tick_count = v->at("tick_count").as_int();
    vt.final_temperature = v->at("final_temperature").as_double();
    vt.final_fauna = v->at("final_fauna").as_double();
    vt.final_eco_health = v->at("final_eco_health").as_double();
    vt.final_population = v->at("final_population").as_int();
    vt.final_food = v->at("final_food").as_double();
    vt.total_births = v->at("total_births").as_int();
    const Node c = v->at("culture");
    vt.culture.craft_material = c.at("craft_material").as_string();
    vt.culture.sacred_number = c.at("sacred_number").as_int();
    vt.culture.cultivated_flower = c.at("cultivated_flower").as_string();
    t.village = vt;
  }
  if (auto s = n.find("station")) {
    StationTruth st;
    st.sim_turns = s->at("sim_turns").as_int();
    st.climax_turn = s->at("climax_turn").as_int();
    st.start_minute = s->at("start_minute").as_int();
    const Node bodies = s->at("bodies");
    for (std::size_t i = 0; i < bodies.size(); ++i) {
      const Node b = bodies[i];
      BodyTruth bt;
      bt.body_id = b.at("body_id").as_string();
      bt.crew_id = b.at("crew_id").as_int();
      bt.name = b.at("name").as_string();
      const std::string prof = b.at("profession").as_string();
      auto p = profession_from_name(prof);
      if (!p) b.at("profession").fail("unknown profession '" + prof + "'");
      bt.profession = *p;
      const std::string cause = b.at("cause").as_string();
      auto c = fate_cause_from_name(cause);
      if (!c) b.at("cause").fail("unknown cause '" + cause + "'");
      bt.fate.cause = *c;
      bt.fate.turn = b.at("turn").as_int();
      bt.fate.position = read_coord(b.at("position"));
      st.bodies.push_back(std::move(bt));
    }
    t.station = std::move(st);
  }
  return t;
}

std::uint64_t read_seed(const Node& n) {
  const std::string text = n.as_string();
  try {
    return parse_seed(text).value;
  } catch (const Error&) {
    n.fail("seed must be a decimal string");
  }
}

void check_village(const WorldBundle& b) {
  VillageWorld v;
  v.world = b.world;
  v.buildings = b.buildings;
  if (auto problem = village_connectivity_problem(v)) throw CorruptWorldError("/world/tiles", *problem);
  int plaques = 0;
  for (const auto& o : b.world.objects) {
    if (o.kind == ObjectKind::Plaque) ++plaques;
  }
  if (plaques != 1) throw CorruptWorldError("/world/objects", "expected exactly one plaque");
  if (b.ground_truth && b.ground_truth->village) {
    const int n = b.ground_truth->village->culture.sacred_number;
    for (std::size_t i = 0; i < b.world.objects.size(); ++i) {
      const auto& o = b.world.objects[i];
      if (o.kind != ObjectKind::Chair) continue;
      auto it = o.attributes.find("leg_count");
      if (it == o.attributes.end() || it->second != n) {
        throw CorruptWorldError("/world/objects/" + std::to_string(i) + "/attributes/leg_count",
                                "chair legs must match the sacred number");
      }
    }
  }
}

void check_station(const WorldBundle& b) {
  if (!b.entrance_door) throw CorruptWorldError("/entrance_door", "missing field");
  const Station s = b.station();
  for (std::size_t i = 0; i < s.rooms.size(); ++i) {
    const Room& r = s.rooms[i];
    if (!s.grid.in_bounds({r.rect.x, r.rect.y}) || !s.grid.in_bounds({r.rect.right() - 1, r.rect.bottom() - 1})) {
      throw CorruptWorldError("/rooms/" + std::to_string(i) + "/rect", "room outside the grid");
    }
    for (std::size_t d = 0; d < r.doorways.size(); ++d) {
      if (!s.grid.in_bounds(r.doorways[d])) {
        throw CorruptWorldError("/rooms/" + std::to_string(i) + "/doorways/" + std::to_string(d), "out of bounds");
      }
    }
  }
  if (auto problem = station_problem(s)) {
    const bool walk = problem->find("unreachable") != std::string::npos || problem->find("blocked") != std::string::npos;
    throw CorruptWorldError(walk ? "/world/tiles" : "/rooms", *problem);
  }
  const auto dist = bfs_distances(s.grid.width, s.grid.height, s.grid.passable_mask(), s.entrance_door);
  int last_depth = -1;
  int last_turn = -1;
  for (std::size_t i = 0; i < b.terminals.size(); ++i) {
    const Terminal& t = b.terminals[i];
    const std::string path = "/terminals/" + std::to_string(i);
    if (!s.grid.in_bounds(t.position)) throw CorruptWorldError(path, "out of bounds");
    const PlacedObject* o = s.grid.find_object(t.id);
    if (!o || o->kind != ObjectKind::Terminal || o->position != t.position) {
      throw CorruptWorldError(path + "/id", "no terminal object at this position");
    }
    if (dist[s.grid.index(t.position)] != t.depth) throw CorruptWorldError(path + "/depth", "depth does not match the map");
    if (t.depth < last_depth || (t.depth > last_depth && t.message.turn < last_turn) ||
        (t.depth == last_depth && t.message.turn != last_turn)) {
      throw CorruptWorldError(path, "terminals out of chronological order");
    }
    last_depth = t.depth;
    last_turn = t.message.turn;
  }
  if (b.ground_truth && b.ground_truth->station) {
    const auto& truth = *b.ground_truth->station;
    const std::size_t n = truth.bodies.size();
    if (n < 5 || n > 6) throw CorruptWorldError("/ground_truth/station/bodies", "crew size must be 5 or 6");
    std::set<std::string> names;
    std::map<int, int> death_turn;
    for (std::size_t i = 0; i < n; ++i) {
      const auto& bt = truth.bodies[i];
      const std::string path = "/ground_truth/station/bodies/" + std::to_string(i);
      if (!names.insert(bt.name).second) throw CorruptWorldError(path + "/name", "duplicate crew name");
      const PlacedObject* o = s.grid.find_object(bt.body_id);
      if (!o || o->kind != ObjectKind::Body) throw CorruptWorldError(path + "/body_id", "no such body");
      death_turn[bt.crew_id] = bt.fate.turn;
    }
    for (std::size_t i = 0; i < b.terminals.size(); ++i) {
      const auto& m = b.terminals[i].message;
      auto it = death_turn.find(m.sender);
      if (it == death_turn.end() || it->second <= m.turn) {
        throw CorruptWorldError("/terminals/" + std::to_string(i) + "/message", "sender was not alive at this time");
      }
    }
  }
}

}  // namespace

json coord_to_json(Coord c) { return json{{"x", c.x}, {"y", c.y}}; }

json object_to_json(const PlacedObject& o) {
  json j{{"id", o.id},
         {"x", o.position.x},
         {"y", o.position.y},
         {"kind", std::string(object_name(o.kind))},
         {"description_key", o.description_key},
         {"description", o.description},
         {"blocking", o.blocking}};
  if (!o.attributes.empty()) j["attributes"] = o.attributes;
  return j;
}

json tile_world_to_json(const TileWorld& w) {
  json rows = json::array();
  json burnt = json::array();
  for (int y = 0; y < w.height; ++y) {
    std::string row(static_cast<std::size_t>(w.width), ' ');
    std::string marks(static_cast<std::size_t>(w.width), '.');
    for (int x = 0; x < w.width; ++x) {
      row[static_cast<std::size_t>(x)] = tile_code(w.at({x, y}).kind);
      if (w.at({x, y}).scorched) marks[static_cast<std::size_t>(x)] = 'x';
    }
    rows.push_back(row);
    burnt.push_back(marks);
  }
  json objects = json::array();
  for (const auto& o : w.objects) objects.push_back(object_to_json(o));
  return json{{"width", w.width},   {"height", w.height},   {"tiles", rows},
              {"scorched", burnt},  {"objects", objects},   {"spawn", coord_to_json(w.spawn)},
              {"regions", w.regions}, {"tile_descriptions", w.tile_descriptions}};
}

json message_to_json(const RadioMessage& m) {
  json j{{"sender", m.sender},   {"sender_name", m.sender_name},
         {"turn", m.turn},       {"seq", m.seq},
         {"kind", std::string(message_kind_name(m.kind))},
         {"timestamp", m.timestamp}, {"body", m.body}, {"reply", m.reply}};
  if (!m.symbol.empty()) j["symbol"] = m.symbol;
  if (!m.bindings.empty()) j["bindings"] = m.bindings;
  return j;
}

json ground_truth_to_json(const GroundTruth& t) {
  json j = json::object();
  if (t.village) {
    const auto& v = *t.village;
    j["village"] = json{{"ending", std::string(ending_name(v.ending))},
                        {"tick_count", v.tick_count},
                        {"final_temperature", v.final_temperature},
                        {"final_fauna", v.final_fauna},
                        {"final_eco_health", v.final_eco_health},
                        {"final_population", v.final_population},
                        {"final_food", v.final_food},
                        {"total_births", v.total_births},
                        {"culture", json{{"craft_material", v.culture.craft_material},
                                         {"sacred_number", v.culture.sacred_number},
                                         {"cultivated_flower", v.culture.cultivated_flower}}}};
  }
  if (t.station) {
    const auto& s = *t.station;
    json bodies = json::array();
    for (const auto& b : s.bodies) {
      bodies.push_back(json{{"body_id", b.body_id},
                            {"crew_id", b.crew_id},
                            {"name", b.name},
                            {"profession", std::string(profession_name(b.profession))},
                            {"cause", std::string(fate_cause_name(b.fate.cause))},
                            {"turn", b.fate.turn},
                            {"position", coord_to_json(b.fate.position)}});
    }
    j["station"] = json{{"bodies", bodies},
                        {"sim_turns", s.sim_turns},
                        {"climax_turn", s.climax_turn},
                        {"start_minute", s.start_minute}};
  }
  return j;
}

json bundle_to_json(const WorldBundle& b) {
  json j;
  j["format_version"] = b.format_version;
  j["seed"] = std::to_string(b.seed.value);
  j["config_digest"] = b.config_digest;
  j["game"] = std::string(game_kind_name(b.game));
  j["world"] = tile_world_to_json(b.world);
  json buildings = json::array();
  for (const auto& f : b.buildings) {
    buildings.push_back(json{{"kind", std::string(building_kind_name(f.kind))},
                             {"rect", rect_json(f.rect)},
                             {"door", coord_to_json(f.door)},
                             {"decay_applied", f.decay_applied}});
  }
  j["buildings"] = buildings;
  json rooms = json::array();
  for (const auto& r : b.rooms) {
    json doors = json::array();
    for (Coord d : r.doorways) doors.push_back(coord_to_json(d));
    rooms.push_back(json{{"kind", std::string(room_kind_name(r.kind))},
                         {"label", r.label},
                         {"rect", rect_json(r.rect)},
                         {"doorways", doors},
                         {"scenery", r.scenery}});
  }
  j["rooms"] = rooms;
  json corridors = json::array();
  for (const auto& c : b.corridors) corridors.push_back(rect_json(c));
  j["corridors"] = corridors;
  if (b.entrance_door) j["entrance_door"] = coord_to_json(*b.entrance_door);
  json terminals = json::array();
  for (const auto& t : b.terminals) {
    terminals.push_back(json{{"id", t.id},
                             {"x", t.position.x},
                             {"y", t.position.y},
                             {"depth", t.depth},
                             {"message", message_to_json(t.message)}});
  }
  j["terminals"] = terminals;
  if (b.ground_truth) j["ground_truth"] = ground_truth_to_json(*b.ground_truth);
  return j;
}

WorldBundle bundle_from_json(const json& j) {
  const Node root(j, "");
  WorldBundle b;
  b.format_version = root.at("format_version").as_int();
  if (b.format_version != kFormatVersion) {
    throw Error(ErrorKind::Version, "unsupported format_version " + std::to_string(b.format_version) +
                                        " (this build reads version " + std::to_string(kFormatVersion) + ")");
  }
  b.seed = WorldSeed{read_seed(root.at("seed"))};
  b.config_digest = root.at("config_digest").as_string();
  const std::string game = root.at("game").as_string();
  auto g = game_kind_from_name(game);
  if (!g) root.at("game").fail("unknown game '" + game + "'");
  b.game = *g;
  b.world = read_tile_world(root.at("world"));
  const Node buildings = root.at("buildings");
  for (std::size_t i = 0; i < buildings.size(); ++i) {
    const Node n = buildings[i];
    BuildingFootprint f;
    const std::string kind = n.at("kind").as_string();
    auto k = building_kind_from_name(kind);
    if (!k) n.at("kind").fail("unknown building kind '" + kind + "'");
    f.kind = *k;
    f.rect = read_rect(n.at("rect"));
    f.door = read_coord(n.at("door"));
    f.decay_applied = n.at("decay_applied").as_bool();
    b.buildings.push_back(f);
  }
  const Node rooms = root.at("rooms");
  for (std::size_t i = 0; i < rooms.size(); ++i) {
    const Node n = rooms[i];
    Room r;
    const std::string kind = n.at("kind").as_string();
    auto k = room_kind_from_name(kind);
    if (!k) n.at("kind").fail("unknown room kind '" + kind + "'");
    r.kind = *k;
    r.label = n.at("label").as_string();
    r.rect = read_rect(n.at("rect"));
    const Node doors = n.at("doorways");
    for (std::size_t d = 0; d < doors.size(); ++d) r.doorways.push_back(read_coord(doors[d]));
    const Node scenery = n.at("scenery");
    for (std::size_t s = 0; s < scenery.size(); ++s) r.scenery.push_back(scenery[s].as_string());
    b.rooms.push_back(std::move(r));
  }
  const Node corridors = root.at("corridors");
  for (std::size_t i = 0; i < corridors.size(); ++i) b.corridors.push_back(read_rect(corridors[i]));
  if (auto door = root.find("entrance_door")) b.entrance_door = read_coord(*door);
  const Node terminals = root.at("terminals");
  for (std::size_t i = 0; i < terminals.size(); ++i) {
    const Node n = terminals[i];
    Terminal t;
    t.id = n.at("id").as_string();
    t.position = read_coord(n);
    t.depth = n.at("depth").as_int();
    t.message = read_message(n.at("message"));
    b.terminals.push_back(std::move(t));
  }
  if (auto truth = root.find("ground_truth")) b.ground_truth = read_truth(*truth);
  return b;
}

void validate_bundle(const WorldBundle& b) {
  const TileWorld& w = b.world;
  if (static_cast<int>(w.tiles.size()) != w.width * w.height) throw CorruptWorldError("/world/tiles", "size mismatch");
  std::set<std::string> ids;
  for (std::size_t i = 0; i < w.objects.size(); ++i) {
    const auto& o = w.objects[i];
    const std::string path = "/world/objects/" + std::to_string(i);
    if (!w.in_bounds(o.position)) throw CorruptWorldError(path, "object outside the grid");
    if (!ids.insert(o.id).second) throw CorruptWorldError(path + "/id", "duplicate object id '" + o.id + "'");
  }
  if (!w.in_bounds(w.spawn)) throw CorruptWorldError("/world/spawn", "spawn outside the grid");
  if (b.game == GameKind::Village) check_village(b);
  else check_station(b);
}

std::string serialize_world(const WorldBundle& bundle) { return bundle_to_json(bundle).dump(2) + "\n"; }

WorldBundle parse_world(std::string_view bytes) {
  json j;
  try {
    j = json::parse(bytes.begin(), bytes.end());
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::Parse, std::string("world file is not valid JSON: ") + e.what());
  }
  WorldBundle b;
  try {
    b = bundle_from_json(j);
  } catch (const json::exception& e) {
    throw CorruptWorldError("", e.what());
  }
  validate_bundle(b);
  return b;
}

WorldBundle strip_ground_truth(WorldBundle bundle) {
  bundle.ground_truth.reset();
  return bundle;
}

void save_world_file(const std::string& path, const WorldBundle& bundle) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::NotFound, "cannot write " + path);
  out << serialize_world(bundle);
  if (!out) throw Error(ErrorKind::NotFound, "failed writing " + path);
}

WorldBundle load_world_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::NotFound, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_world(ss.str());
}

}  // namespace forensica
