#include "forensica/content.hpp"

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "forensica/error.hpp"
#include "json.hpp"

namespace forensica {

using nlohmann::json;

namespace {

const std::string& file(const std::map<std::string, std::string>& files, const std::string& name) {
  auto it = files.find(name);
  if (it == files.end()) throw Error(ErrorKind::NotFound, "content file missing: " + name);
  return it->second;
}

json parse(const std::string& text, const std::string& name) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::Parse, name + ": " + e.what());
  }
}

}  // namespace

std::string_view room_kind_name(RoomKind kind) {
  switch (kind) {
    case RoomKind::Entrance: return "Entrance";
    case RoomKind::MessHall: return "MessHall";
    case RoomKind::Residences: return "Residences";
    case RoomKind::Lab1: return "Lab1";
    case RoomKind::SecurityOffice: return "SecurityOffice";
    case RoomKind::SecondaryLab: return "SecondaryLab";
  }
  return "SecondaryLab";
}

std::optional<RoomKind> room_kind_from_name(std::string_view name) {
  for (RoomKind k : {RoomKind::Entrance, RoomKind::MessHall, RoomKind::Residences, RoomKind::Lab1,
                     RoomKind::SecurityOffice, RoomKind::SecondaryLab}) {
    if (room_kind_name(k) == name) return k;
  }
  return std::nullopt;
}

bool SceneryPattern::allowed_in(RoomKind kind) const {
  for (RoomKind r : rooms) {
    if (r == kind) return true;
  }
  return false;
}

std::vector<SceneryPiece> rotate_pieces(const std::vector<SceneryPiece>& pieces, int quarter_turns) {
  std::vector<SceneryPiece> out = pieces;
  for (int t = 0; t < ((quarter_turns % 4) + 4) % 4; ++t) {
    for (auto& p : out) p.offset = Coord{-p.offset.y, p.offset.x};
  }
  return out;
}

bool object_blocks_by_default(ObjectKind kind) {
  switch (kind) {
    case ObjectKind::Chair:
    case ObjectKind::Cutlery:
    case ObjectKind::Toy:
    case ObjectKind::Crop:
    case ObjectKind::Weed:
    case ObjectKind::CattleSkeleton:
    case ObjectKind::PredatorSkeleton:
    case ObjectKind::Perfume:
    case ObjectKind::Hay:
    case ObjectKind::Bed:
    case ObjectKind::Engraving:
    case ObjectKind::Terminal:
    case ObjectKind::Body:
    case ObjectKind::Debris:
      return false;
    default:
      return true;
  }
}

const std::string& GlyphTable::tile(TileKind kind) const {
  auto it = tiles.find(std::string(tile_name(kind)));
  return it == tiles.end() ? unseen : it->second;
}

const std::string& GlyphTable::object(ObjectKind kind) const {
  auto it = objects.find(std::string(object_name(kind)));
  return it == objects.end() ? unseen : it->second;
}

std::vector<SceneryPattern> parse_scenery(const std::string& json_text) {
  const json j = parse(json_text, "scenery.json");
  std::vector<SceneryPattern> out;
  for (const auto& p : j) {
    SceneryPattern pattern;
    pattern.name = p.at("name").get<std::string>();
    pattern.against_wall = p.value("against_wall", false);
    for (const auto& r : p.at("rooms")) {
      auto kind = room_kind_from_name(r.get<std::string>());
      if (!kind) throw Error(ErrorKind::Parse, "scenery '" + pattern.name + "': unknown room kind");
      pattern.rooms.push_back(*kind);
    }
    for (const auto& piece : p.at("pieces")) {
      auto kind = object_from_name(piece.at("kind").get<std::string>());
      if (!kind) throw Error(ErrorKind::Parse, "scenery '" + pattern.name + "': unknown object kind");
      pattern.pieces.push_back({{piece.at("dx").get<int>(), piece.at("dy").get<int>()}, *kind});
    }
    if (pattern.pieces.empty()) throw Error(ErrorKind::Parse, "scenery '" + pattern.name + "' has no pieces");
    out.push_back(std::move(pattern));
  }
  return out;
}

Content parse_content(const std::map<std::string, std::string>& files) {
  Content c;
  c.village_grammar = Grammar::from_json_text(file(files, "village_grammar.json"));
  c.station_grammar = Grammar::from_json_text(file(files, "station_grammar.json"));

  const json engravings = parse(file(files, "engravings.json"), "engravings.json");
  std::set<std::string> distinct;
  for (EndingKind k : kAllEndings) {
    const std::string key(ending_name(k));
    if (!engravings.contains(key)) throw Error(ErrorKind::Parse, "engravings.json lacks " + key);
    c.engravings[k] = engravings.at(key).get<std::string>();
    distinct.insert(c.engravings[k]);
  }
  if (distinct.size() != 3) throw Error(ErrorKind::Parse, "engravings.json: texts must be distinct");

  c.names = parse(file(files, "names.json"), "names.json").get<std::vector<std::string>>();
  if (c.names.size() != 15 || std::set<std::string>(c.names.begin(), c.names.end()).size() != 15) {
    throw Error(ErrorKind::Parse, "names.json must hold 15 distinct names");
  }

  c.scenery = parse_scenery(file(files, "scenery.json"));

  const json glyphs = parse(file(files, "glyphs.json"), "glyphs.json");
  c.glyphs.tiles = glyphs.at("tiles").get<std::map<std::string, std::string>>();
  c.glyphs.objects = glyphs.at("objects").get<std::map<std::string, std::string>>();
  c.glyphs.player = glyphs.value("player", "@");
  c.glyphs.unseen = glyphs.value("unseen", " ");
  return c;
}

const Content& default_content() {
  static const Content content = parse_content(embedded_content());
  return content;
}

Content load_content_dir(const std::string& directory) {
  std::map<std::string, std::string> files;
  for (const auto& entry : std::filesystem::directory_iterator(directory)) {
    if (entry.path().extension() != ".json") continue;
    std::ifstream in(entry.path());
    std::stringstream buffer;
    buffer << in.rdbuf();
    files[entry.path().filename().string()] = buffer.str();
  }
  return parse_content(files);
}

}  // namespace forensica
