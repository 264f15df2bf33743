#include "doctest.h"

#include <algorithm>
#include <map>

#include "forensica/error.hpp"
#include "forensica/world.hpp"

using namespace forensica;

TEST_CASE("clock formatting") {
  CHECK(format_clock(0) == "12:00 am");
  CHECK(format_clock(59) == "12:59 am");
  CHECK(format_clock(60) == "1:00 am");
  CHECK(format_clock(12 * 60) == "12:00 pm");
  CHECK(format_clock(13 * 60 + 5) == "1:05 pm");
  CHECK(format_clock(23 * 60 + 59) == "11:59 pm");
  CHECK(format_clock(kMinutesPerDay) == "12:00 am");
  CHECK(timestamp_for(10 * 60 + 41, 10) == "10:51 am");
  CHECK(timestamp_for(11 * 60 + 55, 10) == "12:05 pm");
  CHECK(timestamp_for(23 * 60 + 59, 2) == "12:01 am");
}

TEST_CASE("liveness filter keeps only messages the sender outlived") {
  std::vector<CrewAgent> crew(2);
  crew[0].member.id = 0;
  crew[0].fate = FateRecord{FateCause::Fire, 10, {}};
  crew[1].member.id = 1;
  crew[1].fate = FateRecord{FateCause::Fire, 30, {}};
  std::vector<RadioMessage> msgs(3);
  msgs[0].sender = 0;
  msgs[0].turn = 9;
  msgs[1].sender = 0;
  msgs[1].turn = 10;
  msgs[2].sender = 1;
  msgs[2].turn = 12;
  const auto kept = liveness_safe(msgs, crew);
  REQUIRE(kept.size() == 2);
  CHECK(kept[0].turn == 9);
  CHECK(kept[1].turn == 12);
}

TEST_CASE("stamping rejects messages from the dead") {
  std::vector<CrewAgent> crew(1);
  crew[0].member.id = 0;
  crew[0].member.name = "Test Person";
  crew[0].fate = FateRecord{FateCause::Fire, 5, {}};
  RadioMessage m;
  m.sender = 0;
  m.turn = 6;
  m.symbol = "reply";
  RandomStream s(1);
  CHECK_THROWS_AS(stamp_messages({m}, 600, crew, default_content().station_grammar, s, EvidenceConfig{}), Error);
  m.turn = 5;
  const auto out = stamp_messages({m}, 600, crew, default_content().station_grammar, s, EvidenceConfig{});
  REQUIRE(out.size() == 1);
  CHECK(out[0].timestamp == "10:05 am");
  CHECK(out[0].sender_name == "Test Person");
  CHECK(!out[0].body.empty());
}

TEST_CASE("terminals follow chronology by depth") {
  GenConfig cfg;
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const StationRun r = run_station_pipeline(WorldSeed{seed}, cfg);
    const WorldBundle& b = r.bundle;
    CAPTURE(seed);
    REQUIRE(b.terminals.size() >= 3);
    std::map<int, int> death;
    for (const auto& a : r.sim.crew) death[a.member.id] = a.fate->turn;
    for (std::size_t i = 0; i < b.terminals.size(); ++i) {
      const Terminal& t = b.terminals[i];
      CHECK(death.at(t.message.sender) > t.message.turn);
      CHECK(!t.message.body.empty());
      CHECK(t.message.symbol.empty());
      if (i > 0) {
        CHECK(t.depth > b.terminals[i - 1].depth);
        CHECK(t.message.turn >= b.terminals[i - 1].message.turn);
      }
      const PlacedObject* o = b.world.find_object(t.id);
      REQUIRE(o);
      CHECK(o->kind == ObjectKind::Terminal);
      CHECK(o->position == t.position);
    }
  }
}

TEST_CASE("body descriptions never carry names") {
  GenConfig cfg;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const WorldBundle b = generate_station_bundle(WorldSeed{seed}, cfg);
    for (const auto& body : b.ground_truth->station->bodies) {
      const PlacedObject* o = b.world.find_object(body.body_id);
      REQUIRE(o);
      CHECK(o->kind == ObjectKind::Body);
      CHECK(o->position == body.fate.position);
      for (const auto& other : b.ground_truth->station->bodies) {
        CHECK(o->description.find(other.name) == std::string::npos);
        const auto first = other.name.substr(0, other.name.find(' '));
        CHECK(o->description.find(first) == std::string::npos);
      }
    }
  }
}

TEST_CASE("body descriptions reflect the cause") {
  const Grammar& g = default_content().station_grammar;
  RandomStream s(4);
  const auto frozen = body_description(FateCause::Exposure, Profession::Scientist, g, s);
  const auto burned = body_description(FateCause::BurnedByAnomaly, Profession::Scientist, g, s);
  CHECK(frozen != burned);
  CHECK(!frozen.empty());
}
