#include "forensica/station.hpp"

#include <algorithm>
#include <array>
#include <deque>

#include "forensica/error.hpp"

namespace forensica {

namespace {

constexpr int kMaxAttempts = 8;
constexpr int kCorridorMargin = 2;
constexpr int kCorridorTries = 60;

std::string symbol_for(ObjectKind kind) {
  std::string key(object_name(kind));
  std::replace(key.begin(), key.end(), '-', '_');
  return key;
}

std::string next_object_id(const TileWorld& world) { return "obj-" + std::to_string(world.objects.size()); }

bool in_any(const std::vector<Rect>& rects, Coord c) {
  return std::any_of(rects.begin(), rects.end(), [c](const Rect& r) { return r.contains(c); });
}

Rect corridor_rect(bool horizontal, int length, Coord origin) {
  return horizontal ? Rect{origin.x, origin.y, length, kCorridorWidth}
                    : Rect{origin.x, origin.y, kCorridorWidth, length};
}

bool corridor_fits(const Rect& r, int width, int height) {
  return r.x >= kCorridorMargin && r.y >= kCorridorMargin && r.right() <= width - kCorridorMargin &&
         r.bottom() <= height - kCorridorMargin;
}

void grow_corridors(RandomStream& stream, Station& s, const StationConfig& cfg) {
  const int target = static_cast<int>(stream.uniform_int(cfg.corridor_count.min, cfg.corridor_count.max));
  const int W = s.grid.width;
  const int H = s.grid.height;
  {
    const bool horizontal = stream.chance(0.5);
    const int len = static_cast<int>(stream.uniform_int(cfg.corridor_length.min, cfg.corridor_length.max));
    const Rect r = corridor_rect(horizontal, len, {0, 0});
    const int x = static_cast<int>((W - r.w) / 2 + stream.uniform_int(-W / 8, W / 8));
    const int y = static_cast<int>((H - r.h) / 2 + stream.uniform_int(-H / 8, H / 8));
    s.corridors.push_back(corridor_rect(horizontal, len, {x, y}));
  }
  for (int tries = 0; static_cast<int>(s.corridors.size()) < target && tries < kCorridorTries * target; ++tries) {
    const Rect& base = s.corridors[stream.index(s.corridors.size())];
    const Coord p{static_cast<int>(stream.uniform_int(base.x, base.right() - 1)),
                  static_cast<int>(stream.uniform_int(base.y, base.bottom() - 1))};
    const bool horizontal = stream.chance(0.5);
    const int len = static_cast<int>(stream.uniform_int(cfg.corridor_length.min, cfg.corridor_length.max));
    Coord origin = p;
    if (horizontal) {
      origin.x -= static_cast<int>(stream.uniform_int(0, len - 1));
      origin.y -= static_cast<int>(stream.uniform_int(0, kCorridorWidth - 1));
    } else {
      origin.x -= static_cast<int>(stream.uniform_int(0, kCorridorWidth - 1));
      origin.y -= static_cast<int>(stream.uniform_int(0, len - 1));
    }
    const Rect r = corridor_rect(horizontal, len, origin);
    // Contains p, so it overlaps `base` by at least one tile.
    if (corridor_fits(r, W, H)) s.corridors.push_back(r);
  }
  if (static_cast<int>(s.corridors.size()) < cfg.corridor_count.min) {
    throw Error(ErrorKind::GenerationFailed, "could not grow enough corridors");
  }
  for (const Rect& r : s.corridors) {
    for (int y = r.y; y < r.bottom(); ++y) {
      for (int x = r.x; x < r.right(); ++x) s.grid.at({x, y}).kind = TileKind::Floor;
    }
  }
  for (int y = 0; y < H; ++y) {
    for (int x = 0; x < W; ++x) {
      if (s.grid.at({x, y}).kind != TileKind::Exterior) continue;
      for (Coord d : kNeighbours8) {
        const Coord n{x + d.x, y + d.y};
        if (s.grid.in_bounds(n) && s.grid.at(n).kind == TileKind::Floor) {
          s.grid.at({x, y}).kind = TileKind::Wall;
          break;
        }
      }
    }
  }
}

// Outer room rectangle sharing the corridor wall on `side` (0 N, 1 E, 2 S, 3 W).
Rect room_against(const Rect& c, int side, int w, int h, RandomStream& stream) {
  const int wo = w + 2;
  const int ho = h + 2;
  switch (side) {
    case 0: {
      const int x = static_cast<int>(stream.uniform_int(c.x - w, c.right() - 2));
      return {x, c.y - 1 - ho + 1, wo, ho};
    }
    case 1: {
      const int y = static_cast<int>(stream.uniform_int(c.y - h, c.bottom() - 2));
      return {c.right(), y, wo, ho};
    }
    case 2: {
      const int x = static_cast<int>(stream.uniform_int(c.x - w, c.right() - 2));
      return {x, c.bottom(), wo, ho};
    }
    default: {
      const int y = static_cast<int>(stream.uniform_int(c.y - h, c.bottom() - 2));
      return {c.x - 1 - wo + 1, y, wo, ho};
    }
  }
}

bool room_fits(const Station& s, const Rect& r) {
  const TileWorld& g = s.grid;
  if (r.x < 1 || r.y < 1 || r.right() > g.width - 1 || r.bottom() > g.height - 1) return false;
  for (int y = r.y; y < r.bottom(); ++y) {
    for (int x = r.x; x < r.right(); ++x) {
      const TileKind k = g.at({x, y}).kind;
      if (r.on_border({x, y})) {
        if (k != TileKind::Exterior && k != TileKind::Wall) return false;
      } else if (k != TileKind::Exterior) {
        return false;
      }
    }
  }
  return true;
}

std::vector<Coord> doorway_candidates(const Station& s, const Rect& r) {
  std::vector<Coord> out;
  const Rect in = r.inflated(-1);
  for (int y = r.y; y < r.bottom(); ++y) {
    for (int x = r.x; x < r.right(); ++x) {
      const Coord c{x, y};
      if (!r.on_border(c)) continue;
      const bool corner = (x == r.x || x == r.right() - 1) && (y == r.y || y == r.bottom() - 1);
      if (corner) continue;
      for (Coord d : kOrthogonal) {
        const Coord inside = c - d;
        const Coord outside = c + d;
        if (in.contains(inside) && s.grid.in_bounds(outside) && in_any(s.corridors, outside)) {
          out.push_back(c);
          break;
        }
      }
    }
  }
  return out;
}

void carve_room(Station& s, const Rect& r, Coord door) {
  for (int y = r.y; y < r.bottom(); ++y) {
    for (int x = r.x; x < r.right(); ++x) {
      s.grid.at({x, y}).kind = r.on_border({x, y}) ? TileKind::Wall : TileKind::Floor;
    }
  }
  s.grid.at(door).kind = TileKind::Door;
}

void attach_rooms(RandomStream& stream, Station& s, const StationConfig& cfg) {
  const int target = static_cast<int>(stream.uniform_int(cfg.room_count.min, cfg.room_count.max));
  for (int attempt = 0; attempt < cfg.room_attempts && static_cast<int>(s.rooms.size()) < target; ++attempt) {
    const Rect& c = s.corridors[stream.index(s.corridors.size())];
    const int side = static_cast<int>(stream.uniform_int(0, 3));
    const int w = static_cast<int>(stream.uniform_int(cfg.room_size.min, cfg.room_size.max));
    const int h = static_cast<int>(stream.uniform_int(cfg.room_size.min, cfg.room_size.max));
    const Rect r = room_against(c, side, w, h, stream);
    if (!room_fits(s, r)) continue;
    const auto doors = doorway_candidates(s, r);
    if (doors.empty()) continue;
    const Coord door = doors[stream.index(doors.size())];
    carve_room(s, r, door);
    Room room;
    room.rect = r;
    room.doorways.push_back(door);
    s.rooms.push_back(std::move(room));
  }
  if (static_cast<int>(s.rooms.size()) < std::max(cfg.room_count.min, 5)) {
    throw Error(ErrorKind::GenerationFailed,
                "only " + std::to_string(s.rooms.size()) + " rooms fit around the corridors");
  }
}

std::vector<std::uint8_t> exterior_reaching_border(const TileWorld& g) {
  std::vector<std::uint8_t> seen(g.tiles.size(), 0);
  std::deque<Coord> q;
  for (int y = 0; y < g.height; ++y) {
    for (int x = 0; x < g.width; ++x) {
      const bool border = x == 0 || y == 0 || x == g.width - 1 || y == g.height - 1;
      if (border && g.at({x, y}).kind == TileKind::Exterior) {
        seen[g.index({x, y})] = 1;
        q.push_back({x, y});
      }
    }
  }
  while (!q.empty()) {
    const Coord c = q.front();
    q.pop_front();
    for (Coord d : kOrthogonal) {
      const Coord n = c + d;
      if (!g.in_bounds(n) || seen[g.index(n)] || g.at(n).kind != TileKind::Exterior) continue;
      seen[g.index(n)] = 1;
      q.push_back(n);
    }
  }
  return seen;
}

void assign_rooms(RandomStream& stream, Station& s) {
  std::size_t entrance = 0;
  for (std::size_t i = 1; i < s.rooms.size(); ++i) {
    const Coord a = s.rooms[i].rect.center();
    const Coord b = s.rooms[entrance].rect.center();
    if (a.y > b.y || (a.y == b.y && a.x < b.x)) entrance = i;
  }
  Room& e = s.rooms[entrance];
  e.kind = RoomKind::Entrance;

  // Exit door: south wall preferred, then east/west, then north.
  const auto open = exterior_reaching_border(s.grid);
  const Rect in = e.interior();
  const std::array<Coord, 4> order{{{0, 1}, {1, 0}, {-1, 0}, {0, -1}}};
  std::vector<Coord> picks;
  for (std::size_t group = 0; group < 3 && picks.empty(); ++group) {
    for (std::size_t k = 0; k < order.size(); ++k) {
      const std::size_t g = k == 0 ? 0 : (k < 3 ? 1 : 2);
      if (g != group) continue;
      const Coord d = order[k];
      for (int y = e.rect.y; y < e.rect.bottom(); ++y) {
        for (int x = e.rect.x; x < e.rect.right(); ++x) {
          const Coord c{x, y};
          if (!e.rect.on_border(c) || s.grid.at(c).kind != TileKind::Wall) continue;
          const Coord inside = c - d;
          const Coord outside = c + d;
          if (in.contains(inside) && s.grid.in_bounds(outside) && open[s.grid.index(outside)]) {
            picks.push_back(c);
          }
        }
      }
    }
  }
  if (picks.empty()) throw Error(ErrorKind::GenerationFailed, "entrance room has no outside wall");
  s.entrance_door = picks[stream.index(picks.size())];
  s.grid.at(s.entrance_door).kind = TileKind::Door;
  e.doorways.push_back(s.entrance_door);

  std::vector<std::size_t> others;
  for (std::size_t i = 0; i < s.rooms.size(); ++i) {
    if (i != entrance) others.push_back(i);
  }
  stream.shuffle(std::span<std::size_t>(others));
  const std::array<RoomKind, 4> fixed{
      {RoomKind::MessHall, RoomKind::Residences, RoomKind::Lab1, RoomKind::SecurityOffice}};
  for (std::size_t k = 0; k < others.size(); ++k) {
    s.rooms[others[k]].kind = k < fixed.size() ? fixed[k] : RoomKind::SecondaryLab;
  }
  int lab_number = 2;
  for (Room& r : s.rooms) {
    switch (r.kind) {
      case RoomKind::Entrance: r.label = "the entrance hall"; break;
      case RoomKind::MessHall: r.label = "the mess hall"; break;
      case RoomKind::Residences: r.label = "the residences"; break;
      case RoomKind::Lab1: r.label = "lab 1"; break;
      case RoomKind::SecurityOffice: r.label = "the security office"; break;
      case RoomKind::SecondaryLab: r.label = "lab " + std::to_string(lab_number++); break;
    }
  }
}

bool interior_connected(const Station& s, const Room& room, const std::vector<std::uint8_t>& blocked) {
  const Rect in = room.interior();
  const auto fronts = doorway_fronts(room);
  if (fronts.empty()) return false;
  std::vector<std::uint8_t> seen(static_cast<std::size_t>(in.w * in.h), 0);
  auto local = [&](Coord c) { return static_cast<std::size_t>((c.y - in.y) * in.w + (c.x - in.x)); };
  std::deque<Coord> q;
  const Coord start = fronts.front();
  if (blocked[s.grid.index(start)]) return false;
  seen[local(start)] = 1;
  q.push_back(start);
  while (!q.empty()) {
    const Coord c = q.front();
    q.pop_front();
    for (Coord d : kOrthogonal) {
      const Coord n = c + d;
      if (!in.contains(n) || seen[local(n)] || blocked[s.grid.index(n)]) continue;
      seen[local(n)] = 1;
      q.push_back(n);
    }
  }
  for (int y = in.y; y < in.bottom(); ++y) {
    for (int x = in.x; x < in.right(); ++x) {
      if (!blocked[s.grid.index({x, y})] && !seen[local({x, y})]) return false;
    }
  }
  return true;
}

Coord rotate_offset(Coord c, int quarter_turns) {
  for (int t = 0; t < quarter_turns; ++t) c = {-c.y, c.x};
  return c;
}

Coord free_tile_in(const Station& s, const Room& room, const std::vector<Coord>& taken, RandomStream& stream) {
  const auto blocked = s.grid.blocking_mask();
  const auto fronts = doorway_fronts(room);
  std::vector<Coord> options;
  const Rect in = room.interior();
  for (int y = in.y; y < in.bottom(); ++y) {
    for (int x = in.x; x < in.right(); ++x) {
      const Coord c{x, y};
      if (blocked[s.grid.index(c)]) continue;
      if (std::find(fronts.begin(), fronts.end(), c) != fronts.end()) continue;
      if (std::find(taken.begin(), taken.end(), c) != taken.end()) continue;
      options.push_back(c);
    }
  }
  if (options.empty()) throw Error(ErrorKind::GenerationFailed, "no free tile in " + room.label);
  return options[stream.index(options.size())];
}

void place_crew(RandomStream& stream, StationBuild& b, const StationConfig& cfg, const Content& content) {
  const Station& s = b.station;
  const int size = static_cast<int>(stream.uniform_int(cfg.crew_size.min, cfg.crew_size.max));
  std::vector<std::string> names = content.names;
  stream.shuffle(std::span<std::string>(names));
  if (static_cast<int>(names.size()) < size) throw Error(ErrorKind::GenerationFailed, "name pool too small");

  std::vector<Profession> jobs{Profession::SecurityOfficer, Profession::LogisticsOfficer};
  while (static_cast<int>(jobs.size()) < size) jobs.push_back(Profession::Scientist);
  stream.shuffle(std::span<Profession>(jobs));

  std::vector<std::size_t> labs;
  for (std::size_t i = 0; i < s.rooms.size(); ++i) {
    if (s.rooms[i].kind == RoomKind::Lab1 || s.rooms[i].kind == RoomKind::SecondaryLab) labs.push_back(i);
  }
  std::vector<Coord> taken;
  for (int i = 0; i < size; ++i) {
    CrewMember m;
    m.id = i;
    m.name = names[static_cast<std::size_t>(i)];
    m.profession = jobs[static_cast<std::size_t>(i)];
    std::size_t room = 0;
    switch (m.profession) {
      case Profession::SecurityOfficer: room = room_index_of_kind(s, RoomKind::SecurityOffice); break;
      case Profession::LogisticsOfficer: room = room_index_of_kind(s, RoomKind::MessHall); break;
      case Profession::Scientist: room = labs[stream.index(labs.size())]; break;
    }
    m.start_position = free_tile_in(s, s.rooms[room], taken, stream);
    taken.push_back(m.start_position);
    b.crew.push_back(std::move(m));
  }
  b.anomaly.position = free_tile_in(s, s.rooms[room_index_of_kind(s, RoomKind::Lab1)], taken, stream);
}

void describe_station(RandomStream& stream, StationBuild& b, const Content& content) {
  const Grammar& g = content.station_grammar;
  for (auto& o : b.station.grid.objects) o.description = g.expand(o.description_key, stream);
  for (auto& m : b.crew) m.description = g.expand("crew_" + std::string(profession_name(m.profession)), stream);
  auto& tiles = b.station.grid.tile_descriptions;
  tiles.clear();
  for (TileKind k : {TileKind::Floor, TileKind::Wall, TileKind::Door, TileKind::Rubble, TileKind::Exterior}) {
    tiles[std::string(tile_name(k))] = g.expand("tile_" + std::string(tile_name(k)), stream);
  }
  tiles["scorched"] = g.expand("tile_scorched", stream);
}

}  // namespace

std::string_view profession_name(Profession p) {
  switch (p) {
    case Profession::SecurityOfficer: return "SecurityOfficer";
    case Profession::LogisticsOfficer: return "LogisticsOfficer";
    case Profession::Scientist: return "Scientist";
  }
  return "Scientist";
}

std::optional<Profession> profession_from_name(std::string_view name) {
  for (Profession p : {Profession::SecurityOfficer, Profession::LogisticsOfficer, Profession::Scientist}) {
    if (profession_name(p) == name) return p;
  }
  return std::nullopt;
}

std::vector<int> area_map(const Station& s) {
  const TileWorld& g = s.grid;
  std::vector<int> area(g.tiles.size(), kNoArea);
  for (int y = 0; y < g.height; ++y) {
    for (int x = 0; x < g.width; ++x) {
      const TileKind k = g.at({x, y}).kind;
      if (k == TileKind::Exterior) area[g.index({x, y})] = kOutsideArea;
      else if (k != TileKind::Wall && in_any(s.corridors, {x, y})) area[g.index({x, y})] = kCorridorArea;
    }
  }
  for (std::size_t i = 0; i < s.rooms.size(); ++i) {
    const Room& r = s.rooms[i];
    const Rect in = r.interior();
    for (int y = in.y; y < in.bottom(); ++y) {
      for (int x = in.x; x < in.right(); ++x) area[g.index({x, y})] = static_cast<int>(i);
    }
    for (Coord d : r.doorways) area[g.index(d)] = static_cast<int>(i);
  }
  return area;
}

std::optional<std::size_t> room_index_at(const Station& s, Coord c) {
  for (std::size_t i = 0; i < s.rooms.size(); ++i) {
    if (s.rooms[i].interior().contains(c)) return i;
    for (Coord d : s.rooms[i].doorways) {
      if (d == c) return i;
    }
  }
  return std::nullopt;
}

std::size_t room_index_of_kind(const Station& s, RoomKind kind) {
  for (std::size_t i = 0; i < s.rooms.size(); ++i) {
    if (s.rooms[i].kind == kind) return i;
  }
  throw Error(ErrorKind::Integrity, "station has no " + std::string(room_kind_name(kind)));
}

std::string location_name(const Station& s, Coord c) {
  if (auto r = room_index_at(s, c)) return s.rooms[*r].label;
  if (s.grid.in_bounds(c) && s.grid.at(c).kind == TileKind::Exterior) return "outside";
  return "the corridor";
}

std::vector<Coord> doorway_fronts(const Room& room) {
  std::vector<Coord> out;
  const Rect in = room.interior();
  for (Coord door : room.doorways) {
    for (Coord d : kOrthogonal) {
      const Coord n = door + d;
      if (in.contains(n)) out.push_back(n);
    }
  }
  return out;
}

Station build_layout(RandomStream& stream, const StationConfig& cfg) {
  Station s;
  s.grid = TileWorld(cfg.width, cfg.height, TileKind::Exterior);
  grow_corridors(stream, s, cfg);
  attach_rooms(stream, s, cfg);
  assign_rooms(stream, s);
  return s;
}

int place_scenery(Station& s, std::size_t room_index, const std::vector<SceneryPattern>& patterns,
                  RandomStream& stream, const StationConfig& cfg) {
  Room& room = s.rooms[room_index];
  std::vector<const SceneryPattern*> allowed;
  for (const auto& p : patterns) {
    if (p.allowed_in(room.kind)) allowed.push_back(&p);
  }
  if (allowed.empty()) return 0;
  const bool lab = room.kind == RoomKind::Lab1 || room.kind == RoomKind::SecondaryLab;
  bool barrel_allowed = lab && stream.chance(cfg.barrel_chance);

  const Rect in = room.interior();
  const auto fronts = doorway_fronts(room);
  std::vector<std::uint8_t> occupied(s.grid.tiles.size(), 0);
  auto blocked = s.grid.blocking_mask();
  int placed = 0;
  for (int attempt = 0; attempt < cfg.scenery_attempts; ++attempt) {
    const SceneryPattern& p = *allowed[stream.index(allowed.size())];
    const int turns = static_cast<int>(stream.uniform_int(0, 3));
    const Coord anchor{static_cast<int>(stream.uniform_int(in.x, in.right() - 1)),
                       static_cast<int>(stream.uniform_int(in.y, in.bottom() - 1))};
    const bool is_barrel = std::any_of(p.pieces.begin(), p.pieces.end(),
                                       [](const SceneryPiece& q) { return q.kind == ObjectKind::FuelBarrel; });
    if (is_barrel && !barrel_allowed) continue;

    const auto pieces = rotate_pieces(p.pieces, turns);
    int top = 0;
    for (const auto& q : p.pieces) top = std::min(top, q.offset.y);
    const Coord north = rotate_offset({0, -1}, turns);

    std::vector<Coord> cells;
    bool ok = true;
    for (std::size_t k = 0; k < pieces.size() && ok; ++k) {
      const Coord c = anchor + pieces[k].offset;
      if (!in.contains(c) || occupied[s.grid.index(c)] || blocked[s.grid.index(c)]) ok = false;
      else if (std::find(fronts.begin(), fronts.end(), c) != fronts.end()) ok = false;
      else if (p.against_wall && p.pieces[k].offset.y == top && s.grid.at(c + north).kind != TileKind::Wall) ok = false;
      cells.push_back(c);
    }
    if (!ok) continue;
    // One-tile margin from any earlier scenery.
    for (Coord c : cells) {
      for (Coord d : kNeighbours8) {
        const Coord n = c + d;
        if (std::find(cells.begin(), cells.end(), n) != cells.end()) continue;
        if (s.grid.in_bounds(n) && occupied[s.grid.index(n)]) ok = false;
      }
    }
    if (!ok) continue;
    auto trial = blocked;
    for (std::size_t k = 0; k < pieces.size(); ++k) {
      if (object_blocks_by_default(pieces[k].kind)) trial[s.grid.index(cells[k])] = 1;
    }
    if (!interior_connected(s, room, trial)) continue;

    for (std::size_t k = 0; k < pieces.size(); ++k) {
      PlacedObject o;
      o.id = next_object_id(s.grid);
      o.position = cells[k];
      o.kind = pieces[k].kind;
      o.blocking = object_blocks_by_default(o.kind);
      o.description_key = symbol_for(o.kind);
      room.scenery.push_back(o.id);
      s.grid.objects.push_back(std::move(o));
      occupied[s.grid.index(cells[k])] = 1;
    }
    blocked = std::move(trial);
    if (is_barrel) barrel_allowed = false;
    ++placed;
  }
  return placed;
}

std::optional<std::string> walkability_problem(const Station& s) {
  const TileWorld& g = s.grid;
  if (!g.in_bounds(s.entrance_door)) return "entrance door out of bounds";
  const auto passable = g.passable_mask();
  if (!passable[g.index(s.entrance_door)]) return "entrance door is blocked";
  const auto dist = bfs_distances(g.width, g.height, passable, s.entrance_door);
  for (int y = 0; y < g.height; ++y) {
    for (int x = 0; x < g.width; ++x) {
      const std::size_t k = g.index({x, y});
      if (g.at({x, y}).kind == TileKind::Exterior || !passable[k]) continue;
      if (dist[k] == kUnreached) {
        return "tile (" + std::to_string(x) + "," + std::to_string(y) + ") unreachable from the entrance";
      }
    }
  }
  return std::nullopt;
}

std::optional<std::string> station_problem(const Station& s) {
  const TileWorld& g = s.grid;
  if (s.corridors.empty()) return "no corridors";
  // Corridors form one connected union.
  {
    std::vector<std::size_t> reached{0};
    std::vector<std::uint8_t> in(s.corridors.size(), 0);
    in[0] = 1;
    for (std::size_t head = 0; head < reached.size(); ++head) {
      const Rect& a = s.corridors[reached[head]];
      for (std::size_t j = 0; j < s.corridors.size(); ++j) {
        if (!in[j] && a.intersects(s.corridors[j])) {
          in[j] = 1;
          reached.push_back(j);
        }
      }
    }
    if (reached.size() != s.corridors.size()) return "corridors are not all connected";
  }
  std::array<int, 6> census{};
  std::size_t entrance = s.rooms.size();
  for (std::size_t i = 0; i < s.rooms.size(); ++i) {
    const Room& r = s.rooms[i];
    ++census[static_cast<std::size_t>(r.kind)];
    if (r.kind == RoomKind::Entrance) entrance = i;
    bool onto_corridor = false;
    for (Coord d : r.doorways) {
      if (!g.in_bounds(d) || g.at(d).kind != TileKind::Door) return "room " + std::to_string(i) + " doorway is not a door";
      for (Coord o : kOrthogonal) {
        if (in_any(s.corridors, d + o) && !r.rect.contains(d + o)) onto_corridor = true;
      }
    }
    if (!onto_corridor) return "room " + std::to_string(i) + " has no doorway onto a corridor";
    for (const auto& o : g.objects) {
      if (o.kind == ObjectKind::Body || o.kind == ObjectKind::Debris) continue;
      if (std::find(r.doorways.begin(), r.doorways.end(), o.position) != r.doorways.end()) {
        return "object " + o.id + " stands in a doorway";
      }
    }
  }
  for (RoomKind k : {RoomKind::Entrance, RoomKind::MessHall, RoomKind::Residences, RoomKind::Lab1,
                     RoomKind::SecurityOffice}) {
    if (census[static_cast<std::size_t>(k)] != 1) return "expected exactly one " + std::string(room_kind_name(k));
  }
  const Coord ec = s.rooms[entrance].rect.center();
  for (const Room& r : s.rooms) {
    const Coord c = r.rect.center();
    if (c.y > ec.y || (c.y == ec.y && c.x < ec.x)) return "entrance is not the southernmost room";
  }
  if (std::find(s.rooms[entrance].doorways.begin(), s.rooms[entrance].doorways.end(), s.entrance_door) ==
      s.rooms[entrance].doorways.end()) {
    return "entrance door is not on the entrance room";
  }
  // Only the entrance door opens onto the snow.
  for (int y = 0; y < g.height; ++y) {
    for (int x = 0; x < g.width; ++x) {
      if (g.at({x, y}).kind != TileKind::Door || Coord{x, y} == s.entrance_door) continue;
      for (Coord o : kOrthogonal) {
        const Coord n = Coord{x, y} + o;
        if (g.in_bounds(n) && g.at(n).kind == TileKind::Exterior) return "second exterior door";
      }
    }
  }
  return walkability_problem(s);
}

StationBuild build_station(WorldSeed seed, const GenConfig& config, const Content& content) {
  std::string last_problem;
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    const std::string suffix = attempt == 0 ? "" : "#" + std::to_string(attempt);
    auto stage = [&](const char* name) { return derive_stream(seed, std::string(name) + suffix); };
    try {
      StationBuild b;
      auto layout = stage("station.layout");
      b.station = build_layout(layout, config.station);
      auto scenery = stage("station.scenery");
      for (std::size_t i = 0; i < b.station.rooms.size(); ++i) {
        place_scenery(b.station, i, content.scenery, scenery, config.station);
      }
      auto crew = stage("station.crew");
      place_crew(crew, b, config.station, content);
      auto text = stage("station.text");
      describe_station(text, b, content);
      const std::size_t entrance = room_index_of_kind(b.station, RoomKind::Entrance);
      const auto fronts = doorway_fronts(b.station.rooms[entrance]);
      b.station.grid.spawn = b.station.entrance_door;
      for (Coord f : fronts) {
        for (Coord d : kOrthogonal) {
          if (f + d == b.station.entrance_door) b.station.grid.spawn = f;
        }
      }
      if (auto problem = station_problem(b.station)) {
        last_problem = *problem;
        continue;
      }
      return b;
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::GenerationFailed) throw;
      last_problem = e.what();
    }
  }
  throw Error(ErrorKind::GenerationFailed,
              "station construction failed after " + std::to_string(kMaxAttempts) + " attempts: " + last_problem);
}

}  // namespace forensica
