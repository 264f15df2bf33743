#pragma once

#include <string>
#include <vector>

#include "forensica/config.hpp"
#include "forensica/grammar.hpp"
#include "forensica/rng.hpp"
#include "forensica/station.hpp"
#include "forensica/station_sim.hpp"

namespace forensica {

struct Terminal {
  std::string id;
  Coord position;
  RadioMessage message;
  int depth = 0;  // steps from the entrance door
  friend bool operator==(const Terminal&, const Terminal&) = default;
};

inline constexpr int kMinutesPerDay = 24 * 60;

// 12-hour clock, "h:mm am" / "h:mm pm". Minutes wrap at midnight.
std::string format_clock(int minute_of_day);
// One turn is one minute.
std::string timestamp_for(int start_minute, int turn);

// Adds timestamps and rendered bodies. Throws Error(Integrity) for a message
// whose sender was already dead when it was sent.
std::vector<RadioMessage> stamp_messages(const std::vector<RadioMessage>& log, int start_minute,
                                         const std::vector<CrewAgent>& crew, const Grammar& grammar,
                                         RandomStream& stream, const EvidenceConfig& config);

// Messages whose sender demonstrably outlived them (death turn > message turn).
std::vector<RadioMessage> liveness_safe(const std::vector<RadioMessage>& messages, const std::vector<CrewAgent>& crew);

// Chooses which messages survive and where their terminals stand. Terminals
// sorted by depth carry non-decreasing timestamps. Throws
// Error(GenerationFailed) when fewer than 3 terminal sites exist.
std::vector<Terminal> place_terminals(const Station& station, const std::vector<RadioMessage>& messages,
                                      const std::vector<CrewAgent>& crew, RandomStream& stream,
                                      const EvidenceConfig& config);

// Wall-adjacent, object-free, reachable floor tiles with their entrance depth.
std::vector<std::pair<Coord, int>> terminal_sites(const Station& station);

}  // namespace forensica
