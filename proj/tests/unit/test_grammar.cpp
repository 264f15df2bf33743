#include "doctest.h"

#include <set>

#include "forensica/content.hpp"
#include "forensica/error.hpp"
#include "forensica/grammar.hpp"

using namespace forensica;
using Rules = std::map<std::string, std::vector<std::string>>;

TEST_CASE("expansion picks alternatives with one draw per symbol") {
  Grammar g(Rules{{"start", {"#animal# and #animal#"}}, {"animal", {"cat", "dog", "owl"}}});
  RandomStream s(1);
  RandomStream ref(1);
  const std::vector<std::string> animals{"cat", "dog", "owl"};
  ref.uniform_int(0, 0);  // start has one alternative but still draws
  const std::string a = animals[ref.uniform_int(0, 2)];
  const std::string b = animals[ref.uniform_int(0, 2)];
  CHECK(g.expand("start", s) == a + " and " + b);
}

TEST_CASE("modifiers") {
  CHECK(apply_modifier("apple", "a") == "an apple");
  CHECK(apply_modifier("pear", "a") == "a pear");
  CHECK(apply_modifier("box", "s") == "boxes");
  CHECK(apply_modifier("berry", "s") == "berries");
  CHECK(apply_modifier("day", "s") == "days");
  CHECK(apply_modifier("bench", "s") == "benches");
  CHECK(apply_modifier("chair", "s") == "chairs");
  CHECK(apply_modifier("stone", "capitalize") == "Stone");
  CHECK(apply_modifier("stone", "upper") == "STONE");
  CHECK_THROWS_AS(apply_modifier("x", "nope"), Error);
}

TEST_CASE("escaped hash and markers pass through") {
  Grammar g(Rules{{"start", {"number \\#3, made of @MATERIAL@"}}});
  RandomStream s(2);
  const std::string out = g.expand("start", s);
  CHECK(out == "number #3, made of @MATERIAL@");
  CHECK(find_markers(out) == std::vector<std::string>{"MATERIAL"});
}

TEST_CASE("dangling references are rejected") {
  CHECK_THROWS_AS(Grammar::from_json_text(R"({"start": ["#missing#"]})"), Error);
  try {
    Grammar::from_json_text(R"({"start": ["#missing#"]})");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::MissingRule);
    CHECK(std::string(e.what()).find("missing") != std::string::npos);
  }
}

TEST_CASE("runaway recursion is reported") {
  Grammar g(Rules{{"loop", {"#loop#"}}});
  RandomStream s(3);
  try {
    g.expand("loop", s);
    FAIL("expected recursion error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Recursion);
  }
}

TEST_CASE("substitution is idempotent and strict") {
  DynamicContext ctx;
  ctx.bind("MATERIAL", "copper");
  const std::string once = substitute("a @MATERIAL@ bowl", ctx);
  CHECK(once == "a copper bowl");
  CHECK(substitute(once, ctx) == once);
  CHECK_THROWS_AS(substitute("@UNBOUND@", ctx), Error);
  CHECK_THROWS_AS(ctx.bind("BAD", "@MATERIAL@"), Error);
}

TEST_CASE("layered context") {
  DynamicContext base;
  base.bind("A", "1");
  const auto layered = base.with({{"B", "2"}, {"A", "3"}});
  CHECK(substitute("@A@@B@", layered) == "32");
  CHECK(substitute("@A@", base) == "1");
}

TEST_CASE("embedded content parses and validates") {
  const Content& c = default_content();
  CHECK_NOTHROW(c.village_grammar.validate());
  CHECK_NOTHROW(c.station_grammar.validate());
  CHECK(c.engravings.size() == 3);
  CHECK(c.names.size() >= 6);
  CHECK(!c.scenery.empty());
  CHECK(c.glyphs.tile(TileKind::Wall) == "#");
}

TEST_CASE("engravings are distinct per ending") {
  const Content& c = default_content();
  std::set<std::string> texts;
  for (EndingKind k : kAllEndings) texts.insert(c.engravings.at(k));
  CHECK(texts.size() == 3);
}
