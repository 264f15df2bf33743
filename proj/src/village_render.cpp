#include "forensica/village_render.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>

#include "forensica/error.hpp"

namespace forensica {

namespace {

constexpr int kMaxAttempts = 8;

int region_index(int bx, int by) { return by * (kVillageSize / kRegionSize) + bx; }

bool is_central_block(int bx, int by) { return bx >= 3 && bx <= 6 && by >= 3 && by <= 6; }

std::string next_object_id(const TileWorld& world) { return "obj-" + std::to_string(world.objects.size()); }

void add_object(TileWorld& world, Coord at, ObjectKind kind) {
  PlacedObject o;
  o.id = next_object_id(world);
  o.position = at;
  o.kind = kind;
  o.blocking = object_blocks_by_default(kind);
  std::string key(object_name(kind));
  std::replace(key.begin(), key.end(), '-', '_');
  o.description_key = key;
  world.objects.push_back(std::move(o));
}

bool has_object(const TileWorld& world, Coord c) {
  return std::any_of(world.objects.begin(), world.objects.end(),
                     [c](const PlacedObject& o) { return o.position == c; });
}

bool has_blocking_object(const TileWorld& world, Coord c) {
  return std::any_of(world.objects.begin(), world.objects.end(),
                     [c](const PlacedObject& o) { return o.blocking && o.position == c; });
}

void reserve_blocks(VillageWorld& v, const Rect& r, const std::string& label) {
  for (int by = r.y / kRegionSize; by <= (r.bottom() - 1) / kRegionSize; ++by) {
    for (int bx = r.x / kRegionSize; bx <= (r.right() - 1) / kRegionSize; ++bx) {
      auto& slot = v.world.regions[region_index(bx, by)];
      if (slot.empty()) slot = label;
    }
  }
}

bool blocks_free(const VillageWorld& v, const Rect& r) {
  for (int by = r.y / kRegionSize; by <= (r.bottom() - 1) / kRegionSize; ++by) {
    for (int bx = r.x / kRegionSize; bx <= (r.right() - 1) / kRegionSize; ++bx) {
      if (!v.world.regions[region_index(bx, by)].empty()) return false;
    }
  }
  return true;
}

Rect interior_of(const Rect& r) { return {r.x + 1, r.y + 1, r.w - 2, r.h - 2}; }

// Walls (or a fence for fields) on the border, floor/soil inside, one door.
void lay_structure(TileWorld& world, const BuildingFootprint& b) {
  const bool field = b.kind == BuildingKind::Field;
  for (int y = b.rect.y; y < b.rect.bottom(); ++y) {
    for (int x = b.rect.x; x < b.rect.right(); ++x) {
      const Coord c{x, y};
      if (b.rect.on_border(c)) {
        world.at(c).kind = field ? TileKind::Fence : TileKind::Wall;
      } else {
        world.at(c).kind = field ? TileKind::Soil : TileKind::Floor;
      }
    }
  }
  world.at(b.door).kind = TileKind::Door;
}

Coord door_inside(const BuildingFootprint& b) {
  const Rect in = interior_of(b.rect);
  Coord c = b.door;
  c.x = std::clamp(c.x, in.x, in.right() - 1);
  c.y = std::clamp(c.y, in.y, in.bottom() - 1);
  return c;
}

Coord door_outside(const BuildingFootprint& b) { return b.door + (b.door - door_inside(b)); }

// Tries to put a building of `kind` across from `road`, extending in `dir`.
bool try_place_building(VillageWorld& v, RandomStream& stream, BuildingKind kind, Coord road, Coord dir) {
  int across = 0;
  int depth = 0;
  switch (kind) {
    case BuildingKind::House:
      across = static_cast<int>(stream.uniform_int(5, 7));
      depth = static_cast<int>(stream.uniform_int(5, 7));
      break;
    case BuildingKind::Barn:
      across = static_cast<int>(stream.uniform_int(7, 9));
      depth = static_cast<int>(stream.uniform_int(6, 8));
      break;
    case BuildingKind::Field:
      across = static_cast<int>(stream.uniform_int(8, 12));
      depth = static_cast<int>(stream.uniform_int(6, 9));
      break;
    default:
      return false;
  }
  const int offset = static_cast<int>(stream.uniform_int(1, across - 2));
  const Coord door = road + dir;
  Rect r;
  if (dir.x == 0) {
    r.w = across;
    r.h = depth;
    r.x = door.x - offset;
    r.y = dir.y > 0 ? door.y : door.y - depth + 1;
  } else {
    r.w = depth;
    r.h = across;
    r.y = door.y - offset;
    r.x = dir.x > 0 ? door.x : door.x - depth + 1;
  }
  const Rect ring = r.inflated(1);
  if (ring.x < 1 || ring.y < 1 || ring.right() > kVillageSize - 1 || ring.bottom() > kVillageSize - 1) return false;
  for (const auto& b : v.buildings) {
    if (b.kind == BuildingKind::Statue && ring.intersects(b.rect.inflated(1))) return false;
  }
  for (int y = ring.y; y < ring.bottom(); ++y) {
    for (int x = ring.x; x < ring.right(); ++x) {
      const Coord c{x, y};
      const TileKind t = v.world.at(c).kind;
      if (r.contains(c)) {
        if (t != TileKind::Ground || has_object(v.world, c)) return false;
      } else {
        if ((t != TileKind::Ground && t != TileKind::Road) || has_blocking_object(v.world, c)) return false;
      }
    }
  }
  BuildingFootprint b{kind, r, door, false};
  lay_structure(v.world, b);
  v.buildings.push_back(b);
  return true;
}

bool road_tile_ok(const VillageWorld& v, Coord c, Coord from) {
  if (c.x < 1 || c.y < 1 || c.x >= kVillageSize - 1 || c.y >= kVillageSize - 1) return false;
  if (v.world.at(c).kind != TileKind::Ground || has_blocking_object(v.world, c)) return false;
  for (Coord d : kOrthogonal) {
    const Coord n = c + d;
    if (n == from) continue;
    if (v.world.at(n).kind == TileKind::Road || v.world.at(n).kind == TileKind::Door) return false;
  }
  return true;
}

bool branch_legal(const VillageWorld& v, Coord road, Coord dir) {
  Coord prev = road;
  for (int i = 1; i <= 3; ++i) {
    const Coord c = road + Coord{dir.x * i, dir.y * i};
    if (!road_tile_ok(v, c, prev)) return false;
    prev = c;
  }
  return true;
}

void line_road_with_buildings(VillageWorld& v, RandomStream& stream, const VillageRenderConfig& cfg,
                              const std::vector<Coord>& road, bool secondary) {
  for (std::size_t i = 0; i < road.size(); ++i) {
    if (!stream.chance(cfg.house_chance)) continue;
    const Coord next = i + 1 < road.size() ? road[i + 1] : road[i];
    const Coord prev = i > 0 ? road[i - 1] : road[i];
    Coord along = next - prev;
    if (along.x == 0 && along.y == 0) along = {1, 0};
    along.x = along.x > 0 ? 1 : (along.x < 0 ? -1 : 0);
    along.y = along.y > 0 ? 1 : (along.y < 0 ? -1 : 0);
    const Coord left{along.y, -along.x};
    const Coord right{-along.y, along.x};
    const Coord side = stream.index(2) == 0 ? left : right;
    BuildingKind kind = BuildingKind::House;
    if (secondary) {
      const double dist = std::sqrt(static_cast<double>(dist2(road[i], v.town_center)));
      const double p = std::clamp(cfg.farm_chance_base + cfg.farm_chance_per_tile * dist, 0.0, 1.0);
      if (stream.chance(p)) kind = stream.chance(0.5) ? BuildingKind::Barn : BuildingKind::Field;
    }
    try_place_building(v, stream, kind, road[i], side);
  }
}

Coord random_interior_tile(RandomStream& stream, const Rect& in) {
  return {in.x + static_cast<int>(stream.uniform_int(0, in.w - 1)),
          in.y + static_cast<int>(stream.uniform_int(0, in.h - 1))};
}

// Picks a tile without a blocking object, avoiding `avoid`. Falls back to no tile.
std::optional<Coord> free_interior_tile(RandomStream& stream, const TileWorld& world, const Rect& in,
                                        Coord avoid) {
  for (int attempt = 0; attempt < 8; ++attempt) {
    const Coord c = random_interior_tile(stream, in);
    if (c != avoid && !has_blocking_object(world, c)) return c;
  }
  return std::nullopt;
}

}  // namespace

std::string_view building_kind_name(BuildingKind kind) {
  switch (kind) {
    case BuildingKind::House: return "House";
    case BuildingKind::Barn: return "Barn";
    case BuildingKind::Field: return "Field";
    case BuildingKind::WorshipHall: return "WorshipHall";
    case BuildingKind::Statue: return "Statue";
  }
  return "House";
}

std::optional<BuildingKind> building_kind_from_name(std::string_view name) {
  for (BuildingKind k : {BuildingKind::House, BuildingKind::Barn, BuildingKind::Field,
                         BuildingKind::WorshipHall, BuildingKind::Statue}) {
    if (building_kind_name(k) == name) return k;
  }
  return std::nullopt;
}

std::string number_word(int n) {
  static const char* words[] = {"zero", "one", "two",   "three", "four", "five",
                                "six",  "seven", "eight", "nine",  "ten"};
  return n >= 0 && n <= 10 ? words[n] : std::to_string(n);
}

VillageWorld empty_village() {
  VillageWorld v;
  v.world = TileWorld(kVillageSize, kVillageSize, TileKind::Ground);
  v.world.regions.assign((kVillageSize / kRegionSize) * (kVillageSize / kRegionSize), "");
  return v;
}

const LakeTier& lake_tier_for(const EcosystemState& eco, const VillageRenderConfig& config) {
  const double span = eco.eco_health.max_cap - eco.eco_health.min_cap;
  const double fraction = span > 0 ? (eco.eco_health.value - eco.eco_health.min_cap) / span : 0.0;
  const LakeTier* tier = &config.lake_tiers.front();
  for (const auto& t : config.lake_tiers) {
    if (fraction >= t.min_eco_fraction) tier = &t;
  }
  return *tier;
}

void place_water(const VillageHistory& history, RandomStream& stream, VillageWorld& v,
                 const VillageRenderConfig& config) {
  const LakeTier& tier = lake_tier_for(history.final_eco, config);
  const int size = std::min(tier.tiles_per_lake, (kRegionSize - 2) * (kRegionSize - 2));
  for (int lake = 0; lake < tier.lakes; ++lake) {
    std::vector<int> free_blocks;
    for (int by = 0; by < kVillageSize / kRegionSize; ++by) {
      for (int bx = 0; bx < kVillageSize / kRegionSize; ++bx) {
        if (!is_central_block(bx, by) && v.world.regions[region_index(bx, by)].empty()) {
          free_blocks.push_back(region_index(bx, by));
        }
      }
    }
    const int block = free_blocks[stream.index(free_blocks.size())];
    const int bx = block % (kVillageSize / kRegionSize);
    const int by = block / (kVillageSize / kRegionSize);
    v.world.regions[block] = "lake";
    const Rect allowed{bx * kRegionSize + 1, by * kRegionSize + 1, kRegionSize - 2, kRegionSize - 2};

    // Random-walk blob grown from the block centre until it reaches `size`.
    std::vector<Coord> cells{{bx * kRegionSize + kRegionSize / 2, by * kRegionSize + kRegionSize / 2}};
    v.world.at(cells[0]).kind = TileKind::Water;
    while (static_cast<int>(cells.size()) < size) {
      const Coord from = cells[stream.index(cells.size())];
      const Coord to = from + kOrthogonal[stream.index(4)];
      if (allowed.contains(to) && v.world.at(to).kind != TileKind::Water) {
        v.world.at(to).kind = TileKind::Water;
        cells.push_back(to);
      }
    }
  }
}

void place_fixed_features(RandomStream& stream, VillageWorld& v, const VillageRenderConfig& config) {
  // Statue in a free central block, plaque at its centre, spawn just south.
  std::vector<int> central;
  for (int by = 3; by <= 6; ++by) {
    for (int bx = 3; bx <= 6; ++bx) {
      if (v.world.regions[region_index(bx, by)].empty()) central.push_back(region_index(bx, by));
    }
  }
  if (central.empty()) throw Error(ErrorKind::GenerationFailed, "no free central region for the statue");
  const int block = central[stream.index(central.size())];
  const int bx = block % (kVillageSize / kRegionSize);
  const int by = block / (kVillageSize / kRegionSize);
  v.world.regions[block] = "statue";
  v.plaque = {bx * kRegionSize + kRegionSize / 2, by * kRegionSize + kRegionSize / 2};
  v.world.spawn = v.plaque + Coord{0, 1};
  add_object(v.world, v.plaque, ObjectKind::Plaque);

  const int r = config.fragment_radius;
  v.buildings.push_back({BuildingKind::Statue, Rect{v.plaque.x - r, v.plaque.y - r, 2 * r + 1, 2 * r + 1},
                         v.plaque, false});
  const int fragments = static_cast<int>(stream.uniform_int(config.fragment_count.min, config.fragment_count.max));
  int placed = 0;
  for (int attempt = 0; placed < fragments && attempt < fragments * 20; ++attempt) {
    const Coord c{v.plaque.x + static_cast<int>(stream.uniform_int(-r, r)),
                  v.plaque.y + static_cast<int>(stream.uniform_int(-r, r))};
    if (!v.world.in_bounds(c) || chebyshev(c, v.world.spawn) <= 1 || chebyshev(c, v.plaque) <= 1) continue;
    if (v.world.at(c).kind != TileKind::Ground || has_object(v.world, c)) continue;
    add_object(v.world, c, ObjectKind::StatueFragment);
    ++placed;
  }

  // Worship hall: nearest feasible 20x10 rect to the statue, scanning outward.
  const bool door_west = stream.chance(0.5);
  const Rect statue_zone = v.buildings.back().rect.inflated(2);
  std::optional<Rect> hall;
  for (int radius = 0; radius <= config.hall_search_radius && !hall; ++radius) {
    for (int dy = -radius; dy <= radius && !hall; ++dy) {
      for (int dx = -radius; dx <= radius && !hall; ++dx) {
        if (std::max(std::abs(dx), std::abs(dy)) != radius) continue;
        const Coord centre = v.plaque + Coord{dx, dy};
        const Rect r2{centre.x - kHallWidth / 2, centre.y - kHallHeight / 2, kHallWidth, kHallHeight};
        const Rect ring = r2.inflated(2);
        if (ring.x < 1 || ring.y < 1 || ring.right() > kVillageSize - 1 || ring.bottom() > kVillageSize - 1) continue;
        if (ring.intersects(statue_zone)) continue;
        bool ok = true;
        for (int y = ring.y; y < ring.bottom() && ok; ++y) {
          for (int x = ring.x; x < ring.right() && ok; ++x) {
            if (v.world.at({x, y}).kind != TileKind::Ground || has_object(v.world, {x, y})) ok = false;
          }
        }
        if (ok && !blocks_free(v, r2)) {
          // Only lakes and the statue hold regions so far; statue overlap is
          // already excluded above.
          for (int yy = r2.y / kRegionSize; yy <= (r2.bottom() - 1) / kRegionSize && ok; ++yy) {
            for (int xx = r2.x / kRegionSize; xx <= (r2.right() - 1) / kRegionSize && ok; ++xx) {
              if (v.world.regions[region_index(xx, yy)] == "lake") ok = false;
            }
          }
        }
        if (ok) hall = r2;
      }
    }
  }
  if (!hall) throw Error(ErrorKind::GenerationFailed, "no 20x10 worship hall placement near the statue");

  const Rect h = *hall;
  const int mid = h.y + h.h / 2 - 1;  // upper aisle row
  const Coord door = door_west ? Coord{h.x, mid} : Coord{h.right() - 1, mid};
  BuildingFootprint building{BuildingKind::WorshipHall, h, door, false};
  lay_structure(v.world, building);
  v.buildings.push_back(building);
  reserve_blocks(v, h, "worship-hall");
  v.town_center = h.center();

  // Pews in rows either side of a two-row aisle, open space and altar at the far end.
  const int step = door_west ? 1 : -1;
  const int near_x = door_west ? h.x + 1 : h.right() - 2;
  for (int col = 2; col <= 11; col += 2) {
    const int x = near_x + step * col;
    for (int y = h.y + 1; y < h.bottom() - 1; ++y) {
      if (y == mid || y == mid + 1) continue;
      add_object(v.world, {x, y}, ObjectKind::Pew);
    }
  }
  const int altar_x = near_x + step * 16;
  add_object(v.world, {altar_x, mid}, ObjectKind::Altar);
  const int far_x = near_x + step * 17;
  add_object(v.world, {far_x, h.y + 2}, ObjectKind::Engraving);
  add_object(v.world, {far_x, h.bottom() - 3}, ObjectKind::Engraving);
}

void grow_roads(RandomStream& stream, VillageWorld& v, const VillageRenderConfig& config) {
  const auto hall_it = std::find_if(v.buildings.begin(), v.buildings.end(),
                                    [](const auto& b) { return b.kind == BuildingKind::WorshipHall; });
  if (hall_it == v.buildings.end()) throw Error(ErrorKind::IllegalState, "grow_roads needs the worship hall");
  const Coord start = door_outside(*hall_it);

  // Main road: BFS shortest path to the nearest ground tile touching water.
  auto idx = [](Coord c) { return static_cast<std::size_t>(c.y) * kVillageSize + c.x; };
  auto touches_water = [&](Coord c) {
    for (Coord d : kOrthogonal) {
      const Coord n = c + d;
      if (v.world.in_bounds(n) && v.world.at(n).kind == TileKind::Water) return true;
    }
    return false;
  };
  auto road_passable = [&](Coord c) {
    return v.world.in_bounds(c) && v.world.at(c).kind == TileKind::Ground && !has_blocking_object(v.world, c);
  };
  std::vector<int> parent(static_cast<std::size_t>(kVillageSize) * kVillageSize, -2);
  std::deque<Coord> queue;
  std::optional<Coord> goal;
  if (road_passable(start)) {
    parent[idx(start)] = -1;
    queue.push_back(start);
  }
  while (!queue.empty() && !goal) {
    const Coord c = queue.front();
    queue.pop_front();
    if (touches_water(c)) {
      goal = c;
      break;
    }
    for (Coord d : kOrthogonal) {
      const Coord n = c + d;
      if (!road_passable(n) || parent[idx(n)] != -2) continue;
      parent[idx(n)] = static_cast<int>(idx(c));
      queue.push_back(n);
    }
  }
  if (!goal) throw Error(ErrorKind::GenerationFailed, "no road route from the worship hall to water");
  std::vector<Coord> path;
  for (int at = static_cast<int>(idx(*goal)); at != -1; at = parent[static_cast<std::size_t>(at)]) {
    path.push_back({at % kVillageSize, at / kVillageSize});
  }
  std::reverse(path.begin(), path.end());
  for (Coord c : path) v.world.at(c).kind = TileKind::Road;
  v.main_road = path;
  std::vector<Coord> roads = path;
  line_road_with_buildings(v, stream, config, path, false);

  // Secondary roads branch off any road tile until the budget is spent.
  const int budget = static_cast<int>(stream.uniform_int(config.road_budget.min, config.road_budget.max));
  int added = 0;
  for (int pass = 0; pass < 500 && added < budget; ++pass) {
    bool any_legal = false;
    for (std::size_t i = 0; i < roads.size() && added < budget; ++i) {
      for (Coord d : kOrthogonal) {
        if (added >= budget) break;
        if (!branch_legal(v, roads[i], d)) continue;
        any_legal = true;
        if (!stream.chance(config.branch_chance)) continue;
        const int length = static_cast<int>(stream.uniform_int(config.branch_length.min, config.branch_length.max));
        std::vector<Coord> branch;
        Coord prev = roads[i];
        for (int k = 1; k <= length; ++k) {
          const Coord c = roads[i] + Coord{d.x * k, d.y * k};
          if (!road_tile_ok(v, c, prev)) break;
          v.world.at(c).kind = TileKind::Road;
          branch.push_back(c);
          prev = c;
        }
        roads.insert(roads.end(), branch.begin(), branch.end());
        ++added;
        line_road_with_buildings(v, stream, config, branch, true);
      }
    }
    if (!any_legal) break;
  }
}

double decay_chance(double temperature, const BoundedValue& bounds, const VillageRenderConfig& config) {
  return std::clamp(config.decay_floor + config.decay_per_degree * (temperature - bounds.min_cap), 0.0, 1.0);
}

DecayStats apply_decay(const VillageHistory& history, RandomStream& stream, VillageWorld& v,
                       const VillageRenderConfig& config) {
  DecayStats stats;
  const double p = decay_chance(history.final_eco.temperature.value, history.final_eco.temperature, config);
  for (auto& b : v.buildings) {
    if (b.kind == BuildingKind::Statue) continue;
    for (int y = b.rect.y; y < b.rect.bottom(); ++y) {
      for (int x = b.rect.x; x < b.rect.right(); ++x) {
        const Coord c{x, y};
        if (!b.rect.on_border(c) || c == b.door) continue;
        ++stats.walls_total;
        if (!stream.chance(p)) continue;
        ++stats.walls_destroyed;
        v.world.at(c).kind = TileKind::Rubble;
        // Some of the broken wall is scattered outward.
        if (stream.chance(0.3)) {
          const Rect in = interior_of(b.rect);
          Coord out = c;
          if (c.x < in.x) out.x -= 1;
          if (c.x >= in.right()) out.x += 1;
          if (c.y < in.y) out.y -= 1;
          if (c.y >= in.bottom()) out.y += 1;
          if (v.world.in_bounds(out) && v.world.at(out).kind == TileKind::Ground && !has_object(v.world, out)) {
            add_object(v.world, out, ObjectKind::Debris);
          }
        }
      }
    }
    b.decay_applied = true;
  }
  return stats;
}

double toy_chance(const VillageHistory& history, const VillageRenderConfig& config) {
  const double births = std::accumulate(history.birth_trace.begin(), history.birth_trace.end(), 0.0);
  const double mean = births / std::max(1, history.tick_count);
  return config.toy_chance_max * std::clamp(mean / config.toy_birth_reference, 0.0, 1.0);
}

double predator_skeleton_chance(const VillageHistory& history, const VillageRenderConfig& config) {
  return std::clamp(config.predator_skeleton_per_fauna * history.final_eco.hostile_fauna.value, 0.0, 1.0);
}

bool crops_failed(const VillageHistory& history) {
  return history.ending.kind == EndingKind::Famine || history.ending.kind == EndingKind::EcosystemCollapse;
}

void populate_items(const VillageHistory& history, RandomStream& stream, VillageWorld& v,
                    const VillageRenderConfig& config) {
  const double p_toy = toy_chance(history, config);
  const double p_predator = predator_skeleton_chance(history, config);
  const bool failed = crops_failed(history);
  const double p_crop = std::clamp(config.crop_density * (failed ? config.failed_crop_factor : 1.0), 0.0, 1.0);
  const double p_weed = std::clamp(config.weed_density * (failed ? config.failed_weed_factor : 1.0), 0.0, 1.0);
  const int legs = history.final_society.culture.sacred_number;

  auto place = [&](Coord c, ObjectKind kind) {
    add_object(v.world, c, kind);
    if (kind == ObjectKind::Chair) v.world.objects.back().attributes["leg_count"] = legs;
  };

  for (const auto& b : v.buildings) {
    if (b.kind == BuildingKind::Statue) continue;
    const Rect in = interior_of(b.rect);
    const Coord entry = door_inside(b);
    switch (b.kind) {
      case BuildingKind::House: {
        if (stream.chance(config.bed_chance)) {
          if (auto c = free_interior_tile(stream, v.world, in, entry)) place(*c, ObjectKind::Bed);
        }
        std::optional<Coord> table;
        if (stream.chance(config.table_chance)) {
          // A table never sits on the tile just inside the door.
          table = free_interior_tile(stream, v.world, in, entry);
          if (table && manhattan(*table, entry) <= 1) table.reset();
          if (table) {
            place(*table, ObjectKind::Table);
            std::vector<Coord> around;
            for (Coord d : kOrthogonal) {
              const Coord n = *table + d;
              if (in.contains(n) && n != entry && !has_blocking_object(v.world, n)) around.push_back(n);
            }
            stream.shuffle(std::span<Coord>(around));
            const int chairs = static_cast<int>(stream.uniform_int(config.chairs_per_table.min, config.chairs_per_table.max));
            for (int i = 0; i < chairs && i < static_cast<int>(around.size()); ++i) place(around[i], ObjectKind::Chair);
          }
        }
        if (stream.chance(config.cutlery_chance)) {
          if (table) {
            place(*table, ObjectKind::Cutlery);
          } else if (auto c = free_interior_tile(stream, v.world, in, entry)) {
            place(*c, ObjectKind::Cutlery);
          }
        }
        for (int i = 0; i < config.toys_per_house_max; ++i) {
          if (!stream.chance(p_toy)) continue;
          if (auto c = free_interior_tile(stream, v.world, in, entry)) place(*c, ObjectKind::Toy);
        }
        if (stream.chance(config.perfume_chance)) {
          if (auto c = free_interior_tile(stream, v.world, in, entry)) place(*c, ObjectKind::Perfume);
        }
        break;
      }
      case BuildingKind::Barn: {
        for (int i = 0; i < 2; ++i) {
          if (!stream.chance(config.hay_chance)) continue;
          if (auto c = free_interior_tile(stream, v.world, in, entry)) place(*c, ObjectKind::Hay);
        }
        if (stream.chance(config.cattle_skeleton_chance)) {
          if (auto c = free_interior_tile(stream, v.world, in, entry)) place(*c, ObjectKind::CattleSkeleton);
        }
        break;
      }
      case BuildingKind::Field: {
        for (int y = in.y; y < in.bottom(); ++y) {
          for (int x = in.x; x < in.right(); ++x) {
            if (stream.chance(p_crop)) {
              place({x, y}, ObjectKind::Crop);
            } else if (stream.chance(p_weed)) {
              place({x, y}, ObjectKind::Weed);
            }
          }
        }
        if (stream.chance(config.cattle_skeleton_chance * 0.5)) {
          if (auto c = free_interior_tile(stream, v.world, in, entry)) place(*c, ObjectKind::CattleSkeleton);
        }
        break;
      }
      default:
        break;
    }
    if (stream.chance(p_predator)) {
      if (auto c = free_interior_tile(stream, v.world, in, entry)) place(*c, ObjectKind::PredatorSkeleton);
    }
  }
}

DynamicContext village_context(const VillageHistory& history, RandomStream& stream, const Content& content) {
  DynamicContext ctx;
  const auto& culture = history.final_society.culture;
  ctx.bind("MATERIAL", culture.craft_material);
  ctx.bind("FLOWER", culture.cultivated_flower);
  ctx.bind("SACREDNUMBER", number_word(culture.sacred_number));
  ctx.bind("DREAMENGRAVING", content.engravings.at(history.ending.kind));
  ctx.bind("RULER", content.village_grammar.expand("ruler_name", stream));
  ctx.bind("VILLAGE", apply_modifier(content.village_grammar.expand("village_name", stream), "capitalize"));
  return ctx;
}

void describe_village(const VillageHistory& history, RandomStream& stream, VillageWorld& v,
                      const Content& content) {
  const Grammar& g = content.village_grammar;
  v.context = village_context(history, stream, content);
  for (auto& o : v.world.objects) {
    o.description = substitute(g.expand(o.description_key, stream), v.context);
  }
  v.world.tile_descriptions.clear();
  for (int k = 0; k <= static_cast<int>(TileKind::Exterior); ++k) {
    const std::string symbol = "tile_" + std::string(tile_name(static_cast<TileKind>(k)));
    if (g.has(symbol)) {
      v.world.tile_descriptions[std::string(tile_name(static_cast<TileKind>(k)))] =
          substitute(g.expand(symbol, stream), v.context);
    }
  }
}

std::optional<std::string> village_connectivity_problem(const VillageWorld& v) {
  const TileWorld& w = v.world;
  if (!w.in_bounds(w.spawn)) return "spawn out of bounds";
  const auto passable = w.passable_mask();
  if (!passable[w.index(w.spawn)]) return "spawn is not walkable";
  const auto dist = bfs_distances(w.width, w.height, passable, w.spawn);
  for (std::size_t i = 0; i < v.buildings.size(); ++i) {
    const auto& b = v.buildings[i];
    if (b.kind == BuildingKind::Statue) continue;
    const Rect in = interior_of(b.rect);
    for (int y = in.y; y < in.bottom(); ++y) {
      for (int x = in.x; x < in.right(); ++x) {
        const std::size_t k = w.index({x, y});
        if (passable[k] && dist[k] == kUnreached) {
          return "building " + std::to_string(i) + " interior tile (" + std::to_string(x) + "," +
                 std::to_string(y) + ") unreachable from spawn";
        }
      }
    }
  }
  return std::nullopt;
}

VillageWorld render_village(const VillageHistory& history, WorldSeed seed, const GenConfig& config,
                            const Content& content) {
  std::string last_problem;
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    const std::string suffix = attempt == 0 ? "" : "#" + std::to_string(attempt);
    auto stage = [&](const char* name) { return derive_stream(seed, std::string(name) + suffix); };
    try {
      VillageWorld v = empty_village();
      auto water = stage("village.water");
      place_water(history, water, v, config.render);
      auto features = stage("village.features");
      place_fixed_features(features, v, config.render);
      auto roads = stage("village.roads");
      grow_roads(roads, v, config.render);
      auto decay = stage("village.decay");
      apply_decay(history, decay, v, config.render);
      auto items = stage("village.items");
      populate_items(history, items, v, config.render);
      auto text = stage("village.text");
      describe_village(history, text, v, content);
      if (auto problem = village_connectivity_problem(v)) {
        last_problem = *problem;
        continue;
      }
      return v;
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::GenerationFailed) throw;
      last_problem = e.what();
    }
  }
  throw Error(ErrorKind::GenerationFailed,
              "village rendering failed after " + std::to_string(kMaxAttempts) + " attempts: " + last_problem);
}

}  // namespace forensica
