#include "forensica/evidence.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "forensica/error.hpp"

namespace forensica {

namespace {

int kind_rank(MessageKind k) {
  switch (k) {
    case MessageKind::Update: return 0;  // proves the sender alive
    case MessageKind::Report: return 1;
    case MessageKind::Intention: return 2;
  }
  return 2;
}

const CrewAgent* find_crew(const std::vector<CrewAgent>& crew, int id) {
  for (const auto& a : crew) {
    if (a.member.id == id) return &a;
  }
  return nullptr;
}

}  // namespace

std::string format_clock(int minute_of_day) {
  const int m = ((minute_of_day % kMinutesPerDay) + kMinutesPerDay) % kMinutesPerDay;
  const int h24 = m / 60;
  const int mm = m % 60;
  int h12 = h24 % 12;
  if (h12 == 0) h12 = 12;
  std::string out = std::to_string(h12) + ":";
  if (mm < 10) out += '0';
  out += std::to_string(mm);
  out += h24 < 12 ? " am" : " pm";
  return out;
}

std::string timestamp_for(int start_minute, int turn) { return format_clock(start_minute + turn); }

std::vector<RadioMessage> stamp_messages(const std::vector<RadioMessage>& log, int start_minute,
                                         const std::vector<CrewAgent>& crew, const Grammar& grammar,
                                         RandomStream& stream, const EvidenceConfig& config) {
  std::vector<RadioMessage> out;
  out.reserve(log.size());
  for (const RadioMessage& m : log) {
    const CrewAgent* sender = find_crew(crew, m.sender);
    if (!sender) throw Error(ErrorKind::Integrity, "message from unknown crew member " + std::to_string(m.sender));
    if (sender->fate && sender->fate->turn < m.turn) {
      throw Error(ErrorKind::Integrity, sender->member.name + " sent a message on turn " + std::to_string(m.turn) +
                                            " after dying on turn " + std::to_string(sender->fate->turn));
    }
    RadioMessage s = m;
    s.sender_name = sender->member.name;
    s.timestamp = timestamp_for(start_minute, m.turn);
    DynamicContext ctx;
    for (const auto& [k, v] : m.bindings) {
      if (k != "SUBJECT_ID") ctx.bind(k, v);
    }
    s.body = substitute(grammar.expand(m.symbol, stream), ctx);
    const bool reply = stream.chance(config.reply_chance);
    s.reply = reply ? grammar.expand("reply", stream) : std::string();
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<RadioMessage> liveness_safe(const std::vector<RadioMessage>& messages, const std::vector<CrewAgent>& crew) {
  std::vector<RadioMessage> out;
  for (const auto& m : messages) {
    const CrewAgent* a = find_crew(crew, m.sender);
    if (a && (!a->fate || a->fate->turn > m.turn)) out.push_back(m);
  }
  return out;
}

std::vector<std::pair<Coord, int>> terminal_sites(const Station& s) {
  const TileWorld& g = s.grid;
  const auto passable = g.passable_mask();
  const auto dist = bfs_distances(g.width, g.height, passable, s.entrance_door);
  const auto areas = area_map(s);
  std::set<Coord> fronts;
  for (const Room& r : s.rooms) {
    for (Coord f : doorway_fronts(r)) fronts.insert(f);
  }
  // Corridor tiles in front of doorways stay clear too.
  for (const Room& r : s.rooms) {
    for (Coord d : r.doorways) {
      for (Coord o : kOrthogonal) fronts.insert(d + o);
    }
  }
  std::vector<std::uint8_t> has_object(g.tiles.size(), 0);
  for (const auto& o : g.objects) {
    if (g.in_bounds(o.position)) has_object[g.index(o.position)] = 1;
  }
  std::vector<std::pair<Coord, int>> out;
  for (int y = 0; y < g.height; ++y) {
    for (int x = 0; x < g.width; ++x) {
      const Coord c{x, y};
      const std::size_t k = g.index(c);
      if (g.at(c).kind != TileKind::Floor || has_object[k] || dist[k] == kUnreached) continue;
      if (areas[k] == kNoArea || areas[k] == kOutsideArea || fronts.count(c)) continue;
      bool by_wall = false;
      for (Coord d : kOrthogonal) {
        const Coord n = c + d;
        if (g.in_bounds(n) && g.at(n).kind == TileKind::Wall) by_wall = true;
      }
      if (by_wall) out.emplace_back(c, dist[k]);
    }
  }
  return out;
}

std::vector<Terminal> place_terminals(const Station& s, const std::vector<RadioMessage>& messages,
                                      const std::vector<CrewAgent>& crew, RandomStream& stream,
                                      const EvidenceConfig& config) {
  const auto sites = terminal_sites(s);
  std::map<int, std::vector<Coord>> by_depth;
  for (const auto& [c, d] : sites) by_depth[d].push_back(c);
  if (sites.size() < 3 || by_depth.size() < 3) {
    throw Error(ErrorKind::GenerationFailed, "fewer than 3 terminal sites");
  }

  int floor_tiles = 0;
  for (const auto& t : s.grid.tiles) {
    if (t.kind == TileKind::Floor) ++floor_tiles;
  }
  const auto pool = liveness_safe(messages, crew);
  std::size_t n = std::min<std::size_t>(
      pool.size(), static_cast<std::size_t>(std::max(config.min_terminals, floor_tiles / config.floor_tiles_per_terminal)));
  n = std::min(n, by_depth.size());

  // Everyone's last word first, then the rest by information value.
  std::vector<std::size_t> order(pool.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  stream.shuffle(std::span<std::size_t>(order));
  std::vector<std::size_t> chosen;
  std::set<std::size_t> taken;
  std::map<int, std::size_t> last_word;
  for (std::size_t i = 0; i < pool.size(); ++i) {
    auto it = last_word.find(pool[i].sender);
    if (it == last_word.end() || pool[i].turn > pool[it->second].turn ||
        (pool[i].turn == pool[it->second].turn && kind_rank(pool[i].kind) <= kind_rank(pool[it->second].kind))) {
      last_word[pool[i].sender] = i;
    }
  }
  std::vector<std::size_t> finals;
  for (const auto& [sender, i] : last_word) finals.push_back(i);
  std::stable_sort(finals.begin(), finals.end(),
                   [&](std::size_t a, std::size_t b) { return kind_rank(pool[a].kind) < kind_rank(pool[b].kind); });
  for (std::size_t i : finals) {
    if (chosen.size() < n) {
      chosen.push_back(i);
      taken.insert(i);
    }
  }
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return kind_rank(pool[a].kind) < kind_rank(pool[b].kind); });
  for (std::size_t i : order) {
    if (chosen.size() >= n) break;
    if (!taken.count(i)) {
      chosen.push_back(i);
      taken.insert(i);
    }
  }
  std::sort(chosen.begin(), chosen.end(), [&](std::size_t a, std::size_t b) { return pool[a].seq < pool[b].seq; });

  std::vector<int> depths;
  for (const auto& [d, cells] : by_depth) depths.push_back(d);
  std::vector<Terminal> out;
  for (std::size_t k = 0; k < chosen.size(); ++k) {
    const std::size_t slot = chosen.size() == 1 ? 0 : (k * (depths.size() - 1) + (chosen.size() - 1) / 2) / (chosen.size() - 1);
    const int depth = depths[slot];
    const auto& cells = by_depth[depth];
    Terminal t;
    t.id = "terminal-" + std::to_string(k + 1);
    t.position = cells[stream.index(cells.size())];
    t.depth = depth;
    t.message = pool[chosen[k]];
    out.push_back(std::move(t));
  }
  return out;
}

}  // namespace forensica
