#include "forensica/calibrate.hpp"

#include "forensica/station_sim.hpp"

namespace forensica {

using nlohmann::json;

std::map<EndingKind, int> ending_counts(const VillageSimConfig& c, std::uint64_t base, int runs) {
  std::map<EndingKind, int> counts;
  for (EndingKind k : kAllEndings) counts[k] = 0;
  for (int i = 0; i < runs; ++i) counts[run_village(WorldSeed{base + static_cast<std::uint64_t>(i)}, c).ending.kind]++;
  return counts;
}

double imbalance(const std::map<EndingKind, int>& counts, int runs) {
  double sum = 0.0;
  for (const auto& [k, n] : counts) {
    const double d = static_cast<double>(n) / runs - 1.0 / 3.0;
    sum += d * d;
  }
  return sum;
}

namespace {

struct Knob {
  const char* name;
  double VillageSimConfig::*field;
  double step;
};

constexpr Knob kKnobs[] = {{"village.damage_chance_per_degree", &VillageSimConfig::damage_chance_per_degree, 0.001},
                           {"village.damage_chance_base", &VillageSimConfig::damage_chance_base, 0.005},
                           {"village.kill_rate", &VillageSimConfig::kill_rate, 0.02}};

}  // namespace

// Coordinate descent: try one step each way on every knob, keep the best,
// halve the steps when nothing improves.
json suggest_nudges(const GenConfig& start, std::uint64_t base, int runs) {
  VillageSimConfig best = start.village;
  double best_score = imbalance(ending_counts(best, base, runs), runs);
  std::map<std::string, double> steps;
  for (const Knob& k : kKnobs) steps[k.name] = k.step;
  for (int round = 0; round < 8; ++round) {
    bool improved = false;
    for (const Knob& k : kKnobs) {
      for (double dir : {1.0, -1.0}) {
        VillageSimConfig trial = best;
        trial.*k.field += dir * steps[k.name];
        if (trial.kill_rate < 0.0) continue;
        const double score = imbalance(ending_counts(trial, base, runs), runs);
        if (score + 1e-12 < best_score) {
          best = trial;
          best_score = score;
          improved = true;
        }
      }
    }
    if (!improved) {
      for (auto& [name, step] : steps) step *= 0.5;
    }
  }
  json out = json::object();
  for (const Knob& k : kKnobs) {
    if (best.*k.field != start.village.*k.field) out[k.name] = best.*k.field;
  }
  return json{{"nudges", out}, {"imbalance", best_score}};
}

std::map<std::string, int> outcome_counts(GameKind game, const GenConfig& config, std::uint64_t base, int runs) {
  std::map<std::string, int> counts;
  if (game == GameKind::Village) {
    for (const auto& [k, n] : ending_counts(config.village, base, runs)) counts[std::string(ending_name(k))] = n;
    return counts;
  }
  for (FateCause c : kAllCauses) counts[std::string(fate_cause_name(c))] = 0;
  for (int i = 0; i < runs; ++i) {
    const StationRun r = run_station_pipeline(WorldSeed{base + static_cast<std::uint64_t>(i)}, config);
    for (const auto& a : r.sim.crew) counts[std::string(fate_cause_name(a.fate->cause))]++;
  }
  return counts;
}

}  // namespace forensica
