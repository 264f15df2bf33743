// Batch tool: generate, calibrate, play, validate, trace.
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "forensica/calibrate.hpp"
#include "forensica/error.hpp"
#include "forensica/session.hpp"
#include "forensica/wire.hpp"

using namespace forensica;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

struct Options {
  std::string game;
  std::string seed = "0";
  std::string config_path;
  std::string out_path;
  std::string world_path;
  std::string script_path;
  int runs = 500;
  std::string seed_base = "0";
  bool suggest = false;
  bool reveal = false;
  bool json_out = false;
};

GenConfig load_config(const Options& o) { return o.config_path.empty() ? GenConfig{} : load_config_file(o.config_path); }

GameKind parse_game(const std::string& name) {
  auto g = game_kind_from_name(name);
  if (!g) throw Error(ErrorKind::InvalidConfig, "game must be 'village' or 'station', got '" + name + "'");
  return *g;
}

// ---- generate --------------------------------------------------------------

int cmd_generate(const Options& o) {
  const GameKind game = parse_game(o.game);
  const GenConfig config = load_config(o);
  const WorldSeed seed = parse_seed(o.seed);
  const WorldBundle b = generate_world(game, seed, config);
  const std::string path =
      o.out_path.empty() ? o.game + "-" + std::to_string(seed.value) + std::string(kWorldFileExtension) : o.out_path;
  save_world_file(path, b);
  json summary{{"game", o.game}, {"seed", std::to_string(seed.value)}, {"path", path}};
  std::ostringstream line;
  line << o.game << " seed " << seed.value << ": ";
  if (game == GameKind::Village) {
    const auto& t = *b.ground_truth->village;
    summary["ending"] = std::string(ending_name(t.ending));
    summary["ticks"] = t.tick_count;
    line << ending_name(t.ending) << " after " << t.tick_count << " ticks";
  } else {
    const auto& t = *b.ground_truth->station;
    summary["crew"] = t.bodies.size();
    summary["terminals"] = b.terminals.size();
    line << t.bodies.size() << " crew, " << b.terminals.size() << " terminals";
  }
  line << " -> " << path;
  std::cout << (o.json_out ? summary.dump() : line.str()) << "\n";
  return kExitOk;
}

// ---- calibrate -------------------------------------------------------------

int cmd_calibrate(const Options& o) {
  const GameKind game = parse_game(o.game.empty() ? "village" : o.game);
  if (o.runs < 1) throw Error(ErrorKind::InvalidConfig, "--runs must be >= 1");
  const GenConfig config = load_config(o);
  const std::uint64_t base = parse_seed(o.seed_base).value;
  const std::map<std::string, int> counts = outcome_counts(game, config, base, o.runs);
  int total = 0;
  for (const auto& [k, n] : counts) total += n;
  json table = json::object();
  for (const auto& [k, n] : counts) {
    table[k] = json{{"count", n}, {"frequency", total ? static_cast<double>(n) / total : 0.0}};
  }
  json result{{"game", std::string(game_kind_name(game))}, {"runs", o.runs}, {"seed_base", std::to_string(base)},
              {"outcomes", table}};
  if (o.suggest) {
    if (game != GameKind::Village) throw Error(ErrorKind::InvalidConfig, "--suggest only tunes village endings");
    result["suggestion"] = suggest_nudges(config, base, o.runs);
  }
  if (o.json_out) {
    std::cout << result.dump() << "\n";
    return kExitOk;
  }
  std::cout << game_kind_name(game) << ": " << o.runs << " runs from seed " << base << "\n";
  for (const auto& [k, n] : counts) {
    std::cout << "  " << std::left << std::setw(20) << k << std::right << std::setw(6) << n << "  " << std::fixed
              << std::setprecision(3) << (total ? static_cast<double>(n) / total : 0.0) << "\n";
  }
  if (o.suggest) {
    const json& s = result["suggestion"];
    if (s["nudges"].empty()) std::cout << "no nudge improves the balance\n";
    for (auto it = s["nudges"].begin(); it != s["nudges"].end(); ++it) {
      std::cout << "suggest " << it.key() << " = " << it.value().get<double>() << "\n";
    }
  }
  return kExitOk;
}

// ---- play ------------------------------------------------------------------

std::string render_view(const GameSession& s, const GlyphTable& glyphs, int half_w = 20, int half_h = 10) {
  const TileWorld& w = s.bundle().world;
  std::string out;
  for (int y = s.player().y - half_h; y <= s.player().y + half_h; ++y) {
    for (int x = s.player().x - half_w; x <= s.player().x + half_w; ++x) {
      const Coord c{x, y};
      if (c == s.player()) {
        out += glyphs.player;
      } else if (!w.in_bounds(c) || !s.discovered().count(c)) {
        out += glyphs.unseen;
      } else if (s.visible().count(c)) {
        const PlacedObject* top = nullptr;
        for (const PlacedObject* o : w.objects_at(c)) {
          if (!top || (o->blocking && !top->blocking)) top = o;
        }
        out += top ? glyphs.object(top->kind) : glyphs.tile(w.at(c).kind);
      } else {
        out += glyphs.tile(w.at(c).kind);
      }
    }
    out += "\n";
  }
  return out;
}

std::vector<std::string> split_words(const std::string& line) {
  std::istringstream in(line);
  std::vector<std::string> words;
  std::string w;
  while (in >> w) words.push_back(w);
  return words;
}

// Turns one typed line into a protocol command. Empty object = local command.
json parse_play_line(const std::vector<std::string>& words, json& draft) {
  static const std::map<std::string, std::string> keys{{"w", "n"}, {"a", "w"}, {"s", "s"}, {"d", "e"}};
  const std::string& verb = words[0];
  if (auto k = keys.find(verb); k != keys.end()) return json{{"cmd", "move"}, {"dir", k->second}};
  if (verb == "move" && words.size() == 2) return json{{"cmd", "move"}, {"dir", words[1]}};
  if (verb == "face" && words.size() == 2) return json{{"cmd", "face"}, {"dir", words[1]}};
  if ((verb == "inspect" || verb == "read") && words.size() == 3) {
    return json{{"cmd", verb}, {"x", std::stoi(words[1])}, {"y", std::stoi(words[2])}};
  }
  if (verb == "claim" && words.size() >= 4) {
    std::string name = words[3];
    for (std::size_t i = 4; i < words.size(); ++i) name += " " + words[i];
    draft[words[1]] = json{{"name", name}, {"cause", words[2]}};
    return json::object();
  }
  if (verb == "report" && words.size() == 1) return json{{"cmd", "report"}, {"entries", draft}};
  if (verb == "quit" && words.size() == 1) return json{{"cmd", "quit"}};
  if ((verb == "map" || verb == "look" || verb == "help") && words.size() == 1) return json::object();
  throw Error(ErrorKind::Parse, "unknown command '" + verb + "' (try help)");
}

constexpr const char* kPlayHelp =
    "commands: w a s d | move <dir> | face <dir> | inspect <x> <y> | read <x> <y> | map\n"
    "          claim <body-id> <cause> <name...> | report | quit\n"
    "directions: n ne e se s sw w nw; causes: BurnedByAnomaly Fire Exposure Explosion\n";

void print_response(const json& r, const GameSession& s) {
  if (r.contains("text")) std::cout << r["text"].get<std::string>() << "\n";
  if (r.contains("message")) {
    const json& m = r["message"];
    std::cout << "[" << m["timestamp"].get<std::string>() << "] " << m["sender_name"].get<std::string>() << ": "
              << m["body"].get<std::string>() << "\n";
    if (!m["reply"].get<std::string>().empty()) std::cout << "  reply: " << m["reply"].get<std::string>() << "\n";
  }
  const std::string cmd = r["cmd"];
  if (cmd == "move" || cmd == "face") {
    std::cout << "at " << s.player().x << "," << s.player().y << " facing " << s.facing().x << "," << s.facing().y
              << "; " << r["diff"]["added"].size() << " tiles lit, " << r["diff"]["removed"].size() << " dimmed\n";
  }
  if (r.contains("score")) {
    std::cout << "score: " << r["score"].get<int>() << " of " << r["crew_size"].get<int>() << "\n";
    for (const auto& b : r["ground_truth"]["station"]["bodies"]) {
      std::cout << "  " << b["body_id"].get<std::string>() << ": " << b["name"].get<std::string>() << ", "
                << b["cause"].get<std::string>() << "\n";
    }
  }
  if (r.contains("summary")) {
    const json& sum = r["summary"];
    std::cout << "explored " << sum["tiles_seen"].get<int>() << " tiles, inspected "
              << sum["objects_inspected"].get<int>() << " objects, read " << sum["terminals_read"].get<int>()
              << " terminals in " << sum["turns"].get<int>() << " turns\n";
  }
}

int cmd_play(const Options& o) {
  if (o.reveal) {
    const char* flag = std::getenv("FORENSICA_TEST");
    if (!flag || std::string(flag) != "1") {
      throw Error(ErrorKind::InvalidConfig, "--reveal is only available with FORENSICA_TEST=1");
    }
  }
  const WorldBundle bundle = load_world_file(o.world_path);
  const GenConfig config = load_config(o);
  const GlyphTable& glyphs = default_content().glyphs;
  GameSession session(bundle, config.session, glyphs);

  std::ifstream script;
  if (!o.script_path.empty()) {
    script.open(o.script_path);
    if (!script) throw Error(ErrorKind::NotFound, "cannot open script " + o.script_path);
  }
  std::istream& in = o.script_path.empty() ? std::cin : script;

  if (o.reveal && bundle.ground_truth) {
    json truth = ground_truth_to_json(*bundle.ground_truth);
    if (o.json_out) {
      json line = json::object();
      line["reveal"] = truth;
      std::cout << line.dump() << "\n";
    } else if (bundle.ground_truth->station) {
      for (const auto& b : bundle.ground_truth->station->bodies) {
        std::cout << "reveal " << b.body_id << " " << fate_cause_name(b.fate.cause) << " " << b.name << "\n";
      }
    } else if (bundle.ground_truth->village) {
      std::cout << "reveal ending " << ending_name(bundle.ground_truth->village->ending) << "\n";
    }
  }
  if (!o.json_out) {
    std::cout << game_kind_name(bundle.game) << " seed " << bundle.seed.value << "\n"
              << render_view(session, glyphs);
  }

  json draft = json::object();
  std::string line;
  while (session.phase() != SessionPhase::Ended && std::getline(in, line)) {
    const auto words = split_words(line);
    if (words.empty() || words[0][0] == '#') continue;
    if (!o.json_out) std::cout << "> " << line << "\n";
    try {
      const json cmd = parse_play_line(words, draft);
      if (cmd.empty()) {
        if (o.json_out) {
          if (words[0] == "map" || words[0] == "look") std::cout << apply_command(session, {{"cmd", "view"}}).dump() << "\n";
          continue;
        }
        if (words[0] == "help") std::cout << kPlayHelp;
        if (words[0] == "map" || words[0] == "look") std::cout << render_view(session, glyphs);
        if (words[0] == "claim") std::cout << "noted " << words[1] << "\n";
        continue;
      }
      const json r = apply_command(session, cmd);
      if (o.json_out) {
        std::cout << r.dump() << "\n";
      } else {
        print_response(r, session);
      }
    } catch (const Error& e) {
      if (o.json_out) {
        std::cout << json{{"ok", false}, {"error", {{"kind", std::string(error_kind_name(e.kind()))}, {"message", e.what()}}}}.dump()
                  << "\n";
      } else {
        std::cout << "! " << e.what() << "\n";
      }
    } catch (const std::logic_error&) {
      std::cout << (o.json_out ? R"({"error":{"kind":"Parse","message":"bad number"},"ok":false})" : "! bad number")
                << "\n";
    }
  }
  if (session.phase() != SessionPhase::Ended) {
    const ExplorationSummary sum = session.quit();
    if (!o.json_out) {
      std::cout << "explored " << sum.tiles_seen << " tiles, inspected " << sum.objects_inspected << " objects, read "
                << sum.terminals_read << " terminals in " << sum.turns << " turns\n";
    }
  }
  return kExitOk;
}

// ---- validate / trace ------------------------------------------------------

int cmd_validate(const Options& o) {
  try {
    const WorldBundle b = load_world_file(o.world_path);
    if (o.json_out) {
      std::cout << json{{"ok", true}, {"game", std::string(game_kind_name(b.game))}}.dump() << "\n";
    } else {
      std::cout << o.world_path << ": ok (" << game_kind_name(b.game) << ")\n";
    }
    return kExitOk;
  } catch (const CorruptWorldError& e) {
    if (o.json_out) {
      std::cout << json{{"ok", false}, {"path", e.path()}, {"message", e.what()}}.dump() << "\n";
    } else {
      std::cout << o.world_path << ": corrupt at " << e.what() << "\n";
    }
    return kExitRuntime;
  }
}

int cmd_trace(const Options& o) {
  const GenConfig config = load_config(o);
  const StationRun r = run_station_pipeline(parse_seed(o.seed), config);
  if (o.json_out) {
    std::cout << trace_json_lines(r.sim);
    return kExitOk;
  }
  for (const SimEvent& e : r.sim.event_log) {
    std::cout << std::setw(4) << e.turn << "  " << std::left << std::setw(10) << e.actor << std::setw(16)
              << event_kind_name(e.kind) << std::right << "(" << e.position.x << "," << e.position.y << ")";
    if (!e.detail.empty()) std::cout << "  " << e.detail;
    std::cout << "\n";
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"forensica: generate and investigate simulated catastrophes"};
  app.require_subcommand(1);
  Options o;

  auto* gen = app.add_subcommand("generate", "generate a world file");
  gen->add_option("game", o.game, "village or station")->required();
  gen->add_option("--seed", o.seed, "world seed (decimal or 0x hex)");
  gen->add_option("--config", o.config_path, "JSON config overriding the defaults");
  gen->add_option("--out", o.out_path, "output path (default <game>-<seed>.forensica.json)");
  gen->add_flag("--json", o.json_out, "machine-readable output");

  auto* cal = app.add_subcommand("calibrate", "tabulate outcomes over many seeds");
  cal->add_option("game", o.game, "village (endings) or station (causes of death)");
  cal->add_option("--runs,-n", o.runs, "number of runs")->check(CLI::PositiveNumber);
  cal->add_option("--seed-base", o.seed_base, "first seed");
  cal->add_option("--config", o.config_path, "JSON config overriding the defaults");
  cal->add_flag("--suggest", o.suggest, "hill-climb parameter nudges toward equal endings");
  cal->add_flag("--json", o.json_out, "machine-readable output");

  auto* play = app.add_subcommand("play", "explore a world file in the terminal");
  play->add_option("world", o.world_path, "world file")->required();
  play->add_option("--script", o.script_path, "read commands from a file instead of stdin");
  play->add_option("--config", o.config_path, "JSON config (session section is used)");
  play->add_flag("--reveal", o.reveal, "print the sealed answers first (needs FORENSICA_TEST=1)");
  play->add_flag("--json", o.json_out, "one protocol response per line");

  auto* val = app.add_subcommand("validate", "check a world file");
  val->add_option("world", o.world_path, "world file")->required();
  val->add_flag("--json", o.json_out, "machine-readable output");

  auto* trace = app.add_subcommand("trace", "print the station simulation event log");
  trace->add_option("--seed", o.seed, "world seed");
  trace->add_option("--config", o.config_path, "JSON config overriding the defaults");
  trace->add_flag("--json", o.json_out, "JSON lines");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*gen) return cmd_generate(o);
    if (*cal) return cmd_calibrate(o);
    if (*play) return cmd_play(o);
    if (*val) return cmd_validate(o);
    if (*trace) return cmd_trace(o);
  } catch (const Error& e) {
    std::cerr << "error (" << error_kind_name(e.kind()) << "): " << e.what() << "\n";
    return e.kind() == ErrorKind::InvalidConfig ? kExitUsage : kExitRuntime;
  }
  return kExitUsage;
}
