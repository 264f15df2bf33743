#include "doctest.h"

#include <algorithm>
#include <map>
#include <set>

#include "forensica/error.hpp"
#include "forensica/station.hpp"

using namespace forensica;

namespace {

const Room& room_of(const Station& s, RoomKind k) { return s.rooms[room_index_of_kind(s, k)]; }

bool in_interior(const Room& r, Coord c) {
  return c.x > r.rect.x && c.y > r.rect.y && c.x < r.rect.right() - 1 && c.y < r.rect.bottom() - 1;
}

}  // namespace

TEST_CASE("stations satisfy their invariants") {
  GenConfig cfg;
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    const StationBuild b = build_station(WorldSeed{seed}, cfg);
    const Station& s = b.station;
    CAPTURE(seed);
    CHECK(!station_problem(s));
    CHECK(!walkability_problem(s));
    CHECK(static_cast<int>(s.rooms.size()) >= cfg.station.room_count.min);

    std::map<RoomKind, int> kinds;
    for (const Room& r : s.rooms) kinds[r.kind]++;
    for (RoomKind k : {RoomKind::Entrance, RoomKind::MessHall, RoomKind::Residences, RoomKind::Lab1,
                       RoomKind::SecurityOffice}) {
      CHECK(kinds[k] == 1);
    }
    const Room& entrance = room_of(s, RoomKind::Entrance);
    CHECK(entrance.rect.contains(s.entrance_door));
    for (const Room& r : s.rooms) CHECK(r.rect.center().y <= entrance.rect.center().y);

    for (const Rect& c : s.corridors) CHECK(std::min(c.w, c.h) == kCorridorWidth);

    CHECK(static_cast<int>(b.crew.size()) >= cfg.station.crew_size.min);
    CHECK(static_cast<int>(b.crew.size()) <= cfg.station.crew_size.max);
    std::set<std::string> names;
    std::set<Coord> starts;
    for (const auto& m : b.crew) {
      names.insert(m.name);
      starts.insert(m.start_position);
      CHECK(!m.description.empty());
      const auto room = room_index_at(s, m.start_position);
      REQUIRE(room);
      const RoomKind k = s.rooms[*room].kind;
      if (m.profession == Profession::SecurityOfficer) CHECK(k == RoomKind::SecurityOffice);
      if (m.profession == Profession::LogisticsOfficer) CHECK(k == RoomKind::MessHall);
      if (m.profession == Profession::Scientist) CHECK((k == RoomKind::Lab1 || k == RoomKind::SecondaryLab));
    }
    CHECK(names.size() == b.crew.size());
    CHECK(starts.size() == b.crew.size());
    CHECK(in_interior(room_of(s, RoomKind::Lab1), b.anomaly.position));
    CHECK(!starts.count(b.anomaly.position));
  }
}

TEST_CASE("generation is deterministic per seed") {
  GenConfig cfg;
  CHECK(build_station(WorldSeed{5}, cfg) == build_station(WorldSeed{5}, cfg));
  CHECK(!(build_station(WorldSeed{5}, cfg) == build_station(WorldSeed{6}, cfg)));
}

TEST_CASE("scenery keeps a one-tile margin and never blocks doorways") {
  GenConfig cfg;
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const Station s = build_station(WorldSeed{seed}, cfg).station;
    std::set<Coord> doors;
    std::set<Coord> fronts;
    for (const Room& r : s.rooms) {
      doors.insert(r.doorways.begin(), r.doorways.end());
      for (Coord f : doorway_fronts(r)) fronts.insert(f);
    }
    for (const auto& o : s.grid.objects) {
      CHECK(!doors.count(o.position));
      if (o.blocking) CHECK(!fronts.count(o.position));
    }
  }
}

TEST_CASE("sealing a doorway is detected") {
  GenConfig cfg;
  Station s = build_station(WorldSeed{3}, cfg).station;
  const Room& lab = room_of(s, RoomKind::Lab1);
  for (Coord d : lab.doorways) s.grid.at(d).kind = TileKind::Wall;
  CHECK(station_problem(s));
}

TEST_CASE("a blocking object in a doorway is detected") {
  GenConfig cfg;
  Station s = build_station(WorldSeed{4}, cfg).station;
  PlacedObject crate;
  crate.id = "obj-x";
  crate.kind = ObjectKind::Crate;
  crate.blocking = true;
  crate.position = room_of(s, RoomKind::MessHall).doorways.front();
  s.grid.objects.push_back(crate);
  CHECK(station_problem(s));
}

TEST_CASE("area map and place names") {
  GenConfig cfg;
  const Station s = build_station(WorldSeed{8}, cfg).station;
  const auto areas = area_map(s);
  const Room& mess = room_of(s, RoomKind::MessHall);
  const Coord inside{mess.rect.x + 1, mess.rect.y + 1};
  CHECK(areas[s.grid.index(inside)] == static_cast<int>(room_index_of_kind(s, RoomKind::MessHall)));
  CHECK(areas[s.grid.index({mess.rect.x, mess.rect.y})] == kNoArea);
  CHECK(location_name(s, inside) == "the mess hall");
  CHECK(areas[s.grid.index({0, 0})] == kOutsideArea);
  CHECK(location_name(s, {0, 0}) == "outside");
  const Rect& c = s.corridors.front();
  CHECK(areas[s.grid.index(c.center())] == kCorridorArea);
  CHECK(location_name(s, c.center()) == "the corridor");
}

TEST_CASE("rotations are quarter turns") {
  const std::vector<SceneryPiece> p{{{0, 0}, ObjectKind::Desk}, {{1, 0}, ObjectKind::Console}};
  CHECK(rotate_pieces(p, 0) == p);
  CHECK(rotate_pieces(rotate_pieces(p, 1), 3) == p);
  CHECK(rotate_pieces(p, 4) == p);
}
