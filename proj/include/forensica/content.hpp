#pragma once

#include <map>
#include <string>
#include <vector>

#include "forensica/grammar.hpp"
#include "forensica/scenery.hpp"
#include "forensica/village_sim.hpp"

namespace forensica {

// content/*.json compiled into the library, keyed by file name.
const std::map<std::string, std::string>& embedded_content();

struct GlyphTable {
  std::map<std::string, std::string> tiles;
  std::map<std::string, std::string> objects;
  std::string player = "@";
  std::string unseen = " ";

  const std::string& tile(TileKind kind) const;
  const std::string& object(ObjectKind kind) const;
};

struct Content {
  Grammar village_grammar;
  Grammar station_grammar;
  std::map<EndingKind, std::string> engravings;
  std::vector<std::string> names;
  std::vector<SceneryPattern> scenery;
  GlyphTable glyphs;
};

// Parsed once from the embedded files.
const Content& default_content();

// Same file layout as content/ on disk.
Content load_content_dir(const std::string& directory);
Content parse_content(const std::map<std::string, std::string>& files);

std::vector<SceneryPattern> parse_scenery(const std::string& json_text);

}  // namespace forensica
