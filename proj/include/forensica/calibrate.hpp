#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "json.hpp"

#include "forensica/config.hpp"
#include "forensica/village_sim.hpp"
#include "forensica/world.hpp"

namespace forensica {

std::map<EndingKind, int> ending_counts(const VillageSimConfig& c, std::uint64_t base, int runs);

// Village: ending name -> runs. Station: fate cause -> crew members.
// Seeds run from base to base + runs - 1.
std::map<std::string, int> outcome_counts(GameKind game, const GenConfig& config, std::uint64_t base, int runs);

// Squared distance of the ending frequencies from an even three-way split.
double imbalance(const std::map<EndingKind, int>& counts, int runs);

// Coordinate descent over a few village knobs toward an even split.
// {"nudges": {field: value}, "imbalance": best}.
nlohmann::json suggest_nudges(const GenConfig& start, std::uint64_t base, int runs);

}  // namespace forensica
