#include "forensica/service.hpp"

#include <cstdio>
#include <random>
#include <vector>

#include "forensica/error.hpp"
#include "forensica/rng.hpp"
#include "forensica/wire.hpp"
#include "forensica/world.hpp"

namespace forensica {

using nlohmann::json;

namespace {

std::string hex16(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::uint64_t entropy64() {
  std::random_device rd;
  return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
}

Reply error_reply(int status, std::string_view kind, const std::string& message) {
  return {status, json{{"ok", false}, {"error", {{"kind", std::string(kind)}, {"message", message}}}}, std::nullopt};
}

Reply error_reply(const Error& e) { return error_reply(status_for(e.kind()), error_kind_name(e.kind()), e.what()); }

// Unexpected failures get a short id so a log line and a bug report can be matched.
Reply internal_error(const std::string& what) {
  const std::string diag = hex16(entropy64()).substr(0, 8);
  std::fprintf(stderr, "forensica-service: internal error %s: %s\n", diag.c_str(), what.c_str());
  Reply r = error_reply(500, "internal", what);
  r.body["error"]["diagnostic_id"] = diag;
  return r;
}

std::vector<std::string> split_path(const std::string& target) {
  std::string path = target.substr(0, target.find('?'));
  std::vector<std::string> parts;
  std::size_t i = 0;
  while (i < path.size()) {
    if (path[i] == '/') {
      ++i;
      continue;
    }
    const std::size_t j = path.find('/', i);
    parts.push_back(path.substr(i, j == std::string::npos ? std::string::npos : j - i));
    if (j == std::string::npos) break;
    i = j;
  }
  return parts;
}

}  // namespace

int status_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NotFound: return 404;
    case ErrorKind::IllegalState: return 409;
    case ErrorKind::Parse:
    case ErrorKind::OutOfReach:
    case ErrorKind::InvalidLabel:
    case ErrorKind::InvalidConfig:
    case ErrorKind::Version:
    case ErrorKind::CorruptWorld: return 400;
    default: return 500;
  }
}

SessionHost::SessionHost(HostOptions options) : options_(std::move(options)), id_state_(entropy64()) {
  validate_config(options_.config);
}

std::string SessionHost::new_id() {
  // Caller holds table_lock_.
  RandomStream s(id_state_);
  id_state_ = s.next_u64();
  return hex16(s.next_u64());
}

json SessionHost::expiry_json(Clock::time_point last_used) const {
  const auto left = std::chrono::duration_cast<std::chrono::seconds>(last_used + options_.ttl - now_());
  return {{"ttl_seconds", options_.ttl.count()}, {"expires_in_seconds", std::max<long long>(0, left.count())}};
}

Reply SessionHost::create(const json& request) {
  if (!request.is_object()) return error_reply(400, "parse", "request body must be a JSON object");
  const std::string game_name = request.value("game", std::string("station"));
  const auto game = game_kind_from_name(game_name);
  if (!game) return error_reply(400, "parse", "unknown game '" + game_name + "'");

  WorldSeed seed;
  try {
    if (!request.contains("seed") || request["seed"].is_null()) {
      seed = WorldSeed{entropy64()};
    } else if (request["seed"].is_number_unsigned() ||
               (request["seed"].is_number_integer() && request["seed"].get<std::int64_t>() >= 0)) {
      seed = WorldSeed{request["seed"].get<std::uint64_t>()};
    } else if (request["seed"].is_string()) {
      seed = parse_seed(request["seed"].get<std::string>());
    } else {
      return error_reply(400, "parse", "seed must be a non-negative integer or a string");
    }
  } catch (const Error& e) {
    return error_reply(400, error_kind_name(e.kind()), e.what());
  }

  auto entry = std::make_shared<Entry>();
  try {
    entry->session = std::make_unique<GameSession>(generate_world(*game, seed, options_.config), options_.config.session);
  } catch (const std::exception& e) {
    return internal_error(std::string("generation failed for ") + game_name + " seed " + std::to_string(seed.value) +
                          ": " + e.what());
  }
  entry->touch(now_());
  json view = entry->session->full_view();

  std::string id;
  {
    std::lock_guard<std::mutex> g(table_lock_);
    do {
      id = new_id();
    } while (sessions_.count(id));
    sessions_[id] = entry;
  }
  expire_idle();
  json body{{"ok", true}, {"session", id}, {"game", game_name}, {"seed", std::to_string(seed.value)}, {"view", view}};
  body["expiry"] = expiry_json(entry->idle_since());
  return {201, body, std::nullopt};
}

std::shared_ptr<SessionHost::Entry> SessionHost::find(const std::string& id) {
  std::lock_guard<std::mutex> g(table_lock_);
  auto it = sessions_.find(id);
  if (it == sessions_.end()) return nullptr;
  if (now_() - it->second->idle_since() > options_.ttl) {
    sessions_.erase(it);
    return nullptr;
  }
  return it->second;
}

bool SessionHost::exists(const std::string& id) { return find(id) != nullptr; }

Reply SessionHost::command(const std::string& id, const json& command) {
  auto entry = find(id);
  if (!entry) return error_reply(404, "not-found", "no session '" + id + "'");
  std::lock_guard<std::mutex> g(entry->lock);
  entry->touch(now_());
  try {
    json out = apply_command(*entry->session, command);
    out["expiry"] = expiry_json(entry->idle_since());
    return {200, out, std::nullopt};
  } catch (const Error& e) {
    return error_reply(e);
  } catch (const json::exception& e) {
    return error_reply(400, "parse", e.what());
  } catch (const std::exception& e) {
    return internal_error(e.what());
  }
}

Reply SessionHost::export_world(const std::string& id) {
  auto entry = find(id);
  if (!entry) return error_reply(404, "not-found", "no session '" + id + "'");
  std::lock_guard<std::mutex> g(entry->lock);
  entry->touch(now_());
  return {200, json(), serialize_world(strip_ground_truth(entry->session->bundle()))};
}

Reply SessionHost::health() const {
  return {200, json{{"ok", true}, {"sessions", size()}, {"ttl_seconds", options_.ttl.count()}}, std::nullopt};
}

std::size_t SessionHost::size() const {
  std::lock_guard<std::mutex> g(table_lock_);
  return sessions_.size();
}

std::size_t SessionHost::expire_idle() {
  std::lock_guard<std::mutex> g(table_lock_);
  const auto now = now_();
  std::size_t dropped = 0;
  for (auto it = sessions_.begin(); it != sessions_.end();) {
    // A session mid-command is busy, not idle.
    std::unique_lock<std::mutex> busy(it->second->lock, std::try_to_lock);
    if (busy.owns_lock() && now - it->second->idle_since() > options_.ttl) {
      busy.unlock();
      it = sessions_.erase(it);
      ++dropped;
    } else {
      ++it;
    }
  }
  return dropped;
}

Reply route_http(SessionHost& host, const std::string& method, const std::string& target, const std::string& body) {
  const auto parts = split_path(target);
  auto parse_body = [&](json& out) -> std::optional<Reply> {
    if (body.empty()) {
      out = json::object();
      return std::nullopt;
    }
    try {
      out = json::parse(body);
    } catch (const json::exception& e) {
      return error_reply(400, "parse", std::string("malformed JSON: ") + e.what());
    }
    return std::nullopt;
  };

  if (parts.size() == 1 && parts[0] == "health") {
    if (method != "GET") return error_reply(405, "method", "use GET");
    return host.health();
  }
  if (parts.empty() || parts[0] != "session") return error_reply(404, "not-found", "no route for " + target);

  if (parts.size() == 1) {
    if (method != "POST") return error_reply(405, "method", "use POST");
    json req;
    if (auto bad = parse_body(req)) return *bad;
    return host.create(req);
  }
  const std::string& id = parts[1];
  if (parts.size() == 3 && parts[2] == "cmd") {
    if (method != "POST") return error_reply(405, "method", "use POST");
    json cmd;
    if (auto bad = parse_body(cmd)) return *bad;
    return host.command(id, cmd);
  }
  if (parts.size() == 3 && parts[2] == "export") {
    if (method != "GET") return error_reply(405, "method", "use GET");
    return host.export_world(id);
  }
  if (parts.size() == 3 && parts[2] == "live") {
    if (!host.exists(id)) return error_reply(404, "not-found", "no session '" + id + "'");
    return error_reply(426, "upgrade-required", "the live channel needs a WebSocket upgrade");
  }
  return error_reply(404, "not-found", "no route for " + target);
}

std::optional<std::string> live_channel_id(const std::string& target) {
  const auto parts = split_path(target);
  if (parts.size() == 3 && parts[0] == "session" && parts[2] == "live") return parts[1];
  return std::nullopt;
}

std::string handle_live_frame(SessionHost& host, const std::string& id, const std::string& frame) {
  json cmd;
  try {
    cmd = json::parse(frame);
  } catch (const json::exception& e) {
    Reply r = error_reply(400, "parse", std::string("malformed JSON: ") + e.what());
    r.body["status"] = r.status;
    return r.body.dump();
  }
  Reply r = host.command(id, cmd);
  if (r.status != 200) r.body["status"] = r.status;
  return r.body.dump();
}

}  // namespace forensica
