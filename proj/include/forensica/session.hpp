#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"

#include "forensica/config.hpp"
#include "forensica/content.hpp"
#include "forensica/world.hpp"

namespace forensica {

enum class SessionPhase { Exploring, Submitted, Ended };
std::string_view session_phase_name(SessionPhase p);

struct FateClaim {
  std::string name;
  FateCause cause = FateCause::BurnedByAnomaly;
  friend bool operator==(const FateClaim&, const FateClaim&) = default;
};

// Keyed by body object id.
struct FateReport {
  std::map<std::string, FateClaim> entries;
  std::optional<int> score;
};

// Pure: counts entries whose name and cause both match.
int score_report(const FateReport& report, const StationTruth& truth);

struct VisibilityDiff {
  std::vector<Coord> added;
  std::vector<Coord> removed;
};

struct MoveResult {
  bool moved = false;
  Coord position;
  std::string text;  // bump description or boundary notice
  VisibilityDiff diff;
};

struct ExplorationSummary {
  int tiles_seen = 0;
  int objects_inspected = 0;
  int terminals_read = 0;
  int turns = 0;
};

// Torch cone test on integer offsets; `facing` is any non-zero vector.
bool in_torch_cone(Coord offset, Coord facing, int radius, int aperture_degrees);

class GameSession {
 public:
  GameSession(WorldBundle bundle, SessionConfig config, const GlyphTable& glyphs = default_content().glyphs);

  GameKind game() const { return bundle_.game; }
  SessionPhase phase() const { return phase_; }
  Coord player() const { return player_; }
  Coord facing() const { return facing_; }
  int turns() const { return turns_; }
  const std::set<Coord>& discovered() const { return discovered_; }
  const std::set<Coord>& visible() const { return visible_; }
  const std::set<std::string>& read_terminals() const { return read_; }
  const std::set<std::string>& inspected() const { return inspected_; }
  const FateReport& report() const { return report_; }

  // Computed from scratch for the current position and facing.
  std::set<Coord> visible_tiles() const;

  MoveResult move(Coord direction);
  VisibilityDiff face(Coord direction);
  // Description of a visible tile: the topmost object there, else the tile.
  std::string inspect(Coord c);
  const RadioMessage& read_terminal(Coord c);
  int submit_report(const FateReport& report);
  ExplorationSummary quit();
  ExplorationSummary summary() const;

  // Throws IllegalState before submission.
  const StationTruth& revealed_truth() const;

  // Client payloads. None of these carry sealed data before submission.
  nlohmann::json tile_json(Coord c) const;
  nlohmann::json full_view() const;
  nlohmann::json diff_json(const VisibilityDiff& diff) const;

  // Full bundle, sealed section included. Exports go through strip_ground_truth.
  const WorldBundle& bundle() const { return bundle_; }

 private:
  void require_active() const;
  VisibilityDiff refresh();
  std::string inspect_text(Coord c) const;
  const std::set<Coord>& area_tiles(int area) const;

  WorldBundle bundle_;
  SessionConfig config_;
  GlyphTable glyphs_;
  std::vector<int> areas_;
  mutable std::map<int, std::set<Coord>> area_cache_;
  Coord player_;
  Coord facing_{0, -1};
  SessionPhase phase_ = SessionPhase::Exploring;
  int turns_ = 0;
  std::set<Coord> visible_;
  std::set<Coord> discovered_;
  std::set<std::string> read_;
  std::set<std::string> inspected_;
  FateReport report_;
};

// Direction names n ne e se s sw w nw.
std::optional<Coord> direction_from_name(std::string_view name);

// The JSON command protocol shared by the CLI, the service and the Python
// module. Commands: view, sync, move, face, inspect, read, report, quit.
// Failures surface as Error.
nlohmann::json apply_command(GameSession& session, const nlohmann::json& command);

// Keys that must never appear in a payload before submission.
const std::vector<std::string>& sealed_keys();
// JSON-pointer paths of sealed keys found anywhere in `payload`.
std::vector<std::string> find_sealed_keys(const nlohmann::json& payload);

}  // namespace forensica
