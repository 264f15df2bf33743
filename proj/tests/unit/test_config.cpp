#include "doctest.h"

#include "forensica/config.hpp"
#include "forensica/error.hpp"

using namespace forensica;

namespace {

std::string error_text(const std::string& json_text) {
  try {
    config_from_json_text(json_text);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::InvalidConfig);
    return e.what();
  }
  return {};
}

}  // namespace

TEST_CASE("defaults validate and round trip") {
  GenConfig c;
  CHECK_NOTHROW(validate_config(c));
  CHECK(config_from_json_text(config_to_json_text(c)) == c);
  CHECK(config_from_json_text("{}") == c);
}

TEST_CASE("partial override keeps other defaults") {
  const GenConfig c = config_from_json_text(R"({"village": {"kill_rate": 0.25}})");
  CHECK(c.village.kill_rate == doctest::Approx(0.25));
  CHECK(c.village.birth_rate == doctest::Approx(GenConfig{}.village.birth_rate));
  CHECK(c.station == GenConfig{}.station);
}

TEST_CASE("errors name the offending field") {
  CHECK(error_text(R"({"village": {"kill_rte": 1}})").find("village.kill_rte") != std::string::npos);
  CHECK(error_text(R"({"sim": {"fire_spread": 2.0}})").find("sim.fire_spread") != std::string::npos);
  CHECK(error_text(R"({"station": {"crew_size": {"min": 7, "max": 6}}})").find("station.crew_size") !=
        std::string::npos);
  CHECK(!error_text("[1, 2]").empty());
  CHECK(!error_text("{not json").empty());
}

TEST_CASE("digest tracks content") {
  GenConfig a;
  GenConfig b;
  CHECK(config_digest(a) == config_digest(b));
  CHECK(config_digest(a).size() == 16);
  b.village.kill_rate += 0.01;
  CHECK(config_digest(a) != config_digest(b));
}
