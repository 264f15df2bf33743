#pragma once

#include <atomic>
#include <chrono>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>

#include "json.hpp"

#include "forensica/config.hpp"
#include "forensica/error.hpp"
#include "forensica/session.hpp"

namespace forensica {

struct HostOptions {
  GenConfig config;
  std::chrono::seconds ttl{30 * 60};
};

// What a transport sends back: HTTP status plus a JSON body, or raw text for
// the export endpoint.
struct Reply {
  int status = 200;
  nlohmann::json body;
  std::optional<std::string> raw;
};

// In-memory session table. Commands on one session run under that session's
// own mutex, so they never interleave; distinct sessions share nothing but the
// table lock, which is never held while a command runs.
class SessionHost {
 public:
  using Clock = std::chrono::steady_clock;

  explicit SessionHost(HostOptions options);

  // Seed absent: drawn from std::random_device and reported back.
  Reply create(const nlohmann::json& request);
  Reply command(const std::string& id, const nlohmann::json& command);
  // World file with the sealed section removed.
  Reply export_world(const std::string& id);
  Reply health() const;

  bool exists(const std::string& id);
  std::size_t size() const;
  // Drops sessions idle for longer than the TTL. Returns how many went.
  std::size_t expire_idle();

  // Tests move time forward through this.
  void set_clock(std::function<Clock::time_point()> now) { now_ = std::move(now); }
  const HostOptions& options() const { return options_; }

 private:
  struct Entry {
    std::mutex lock;
    std::unique_ptr<GameSession> session;
    // Written under `lock`, read under the table lock, hence atomic.
    std::atomic<Clock::rep> last_used{0};
    Clock::time_point idle_since() const { return Clock::time_point(Clock::duration(last_used.load())); }
    void touch(Clock::time_point t) { last_used.store(t.time_since_epoch().count()); }
  };
  std::shared_ptr<Entry> find(const std::string& id);
  std::string new_id();
  nlohmann::json expiry_json(Clock::time_point last_used) const;

  HostOptions options_;
  mutable std::mutex table_lock_;
  std::map<std::string, std::shared_ptr<Entry>> sessions_;
  std::function<Clock::time_point()> now_ = [] { return Clock::now(); };
  std::uint64_t id_state_;
};

// Maps method + target + body onto the host. Everything except the live
// channel upgrade goes through here.
Reply route_http(SessionHost& host, const std::string& method, const std::string& target, const std::string& body);

// "/session/{id}/live" -> id.
std::optional<std::string> live_channel_id(const std::string& target);

// One live-channel frame in, one frame out. Errors come back as frames with
// ok=false and the status the HTTP route would have used.
std::string handle_live_frame(SessionHost& host, const std::string& id, const std::string& frame);

int status_for(ErrorKind kind);

}  // namespace forensica
