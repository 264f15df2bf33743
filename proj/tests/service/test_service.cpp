#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <atomic>
#include <set>
#include <thread>
#include <vector>

#include <boost/asio/connect.hpp>
#include <boost/asio/ip/tcp.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/http.hpp>
#include <boost/beast/websocket.hpp>

#include "forensica/http_server.hpp"
#include "forensica/pathfinding.hpp"
#include "forensica/service.hpp"
#include "forensica/wire.hpp"
#include "forensica/world.hpp"

using namespace forensica;
using nlohmann::json;
namespace asio = boost::asio;
namespace beast = boost::beast;
namespace http = beast::http;
namespace websocket = beast::websocket;
using tcp = asio::ip::tcp;

namespace {

constexpr Coord kSteps[] = {{0, -1}, {1, 0}, {0, 1}, {-1, 0}};

json move_cmd(Coord d) { return {{"cmd", "move"}, {"dx", d.x}, {"dy", d.y}}; }

bool open_tile(const TileWorld& w, Coord c) {
  if (!w.in_bounds(c) || !tile_passable(w.at(c).kind)) return false;
  for (const auto& o : w.objects) {
    if (o.position == c && o.blocking) return false;
  }
  return true;
}

std::string create_id(SessionHost& host, const json& req) {
  const Reply r = host.create(req);
  REQUIRE(r.status == 201);
  return r.body.at("session").get<std::string>();
}

struct Response {
  int status = 0;
  std::string body;
  json parsed() const { return json::parse(body); }
};

// Minimal blocking client; one connection per request.
Response request(unsigned short port, http::verb verb, const std::string& target, const std::string& body = "") {
  asio::io_context ioc;
  tcp::socket sock{ioc};
  sock.connect({asio::ip::make_address("127.0.0.1"), port});
  http::request<http::string_body> req{verb, target, 11};
  req.set(http::field::host, "127.0.0.1");
  req.set(http::field::content_type, "application/json");
  req.body() = body;
  req.prepare_payload();
  http::write(sock, req);
  beast::flat_buffer buf;
  http::response<http::string_body> res;
  http::read(sock, buf, res);
  beast::error_code ec;
  sock.shutdown(tcp::socket::shutdown_both, ec);
  return {static_cast<int>(res.result_int()), res.body()};
}

struct LiveServer {
  SessionHost host;
  HttpServer server;
  std::thread thread;
  explicit LiveServer(HostOptions o = {}) : host(std::move(o)), server(host, "127.0.0.1", 0) {
    thread = std::thread([this] { server.run(); });
  }
  ~LiveServer() {
    server.stop();
    thread.join();
  }
  unsigned short port() const { return server.port(); }
};

}  // namespace

TEST_CASE("create with the same seed twice gives identical views") {
  SessionHost host({});
  const Reply a = host.create({{"game", "station"}, {"seed", 7}});
  const Reply b = host.create({{"game", "station"}, {"seed", "7"}});
  REQUIRE(a.status == 201);
  REQUIRE(b.status == 201);
  CHECK(a.body["view"] == b.body["view"]);
  CHECK(a.body["session"] != b.body["session"]);
  CHECK(a.body["seed"] == "7");
  CHECK(a.body["expiry"]["ttl_seconds"] == 1800);
  CHECK(find_sealed_keys(a.body).empty());
  CHECK(a.body.dump().find("fate") == std::string::npos);
}

TEST_CASE("create without a seed draws and reports one") {
  SessionHost host({});
  const Reply r = host.create({{"game", "village"}});
  REQUIRE(r.status == 201);
  const std::string seed = r.body["seed"];
  CHECK(!seed.empty());
  const Reply again = host.create({{"game", "village"}, {"seed", seed}});
  CHECK(again.body["view"] == r.body["view"]);
}

TEST_CASE("bad create requests are 400") {
  SessionHost host({});
  CHECK(host.create({{"game", "moon"}}).status == 400);
  CHECK(host.create({{"game", "station"}, {"seed", -3}}).status == 400);
  CHECK(host.create({{"game", "station"}, {"seed", "nonsense"}}).status == 400);
  CHECK(host.create(json::array()).status == 400);
}

TEST_CASE("status mapping") {
  SessionHost host({});
  CHECK(host.command("missing", {{"cmd", "view"}}).status == 404);
  const std::string id = create_id(host, {{"game", "station"}, {"seed", 3}});
  CHECK(host.command(id, {{"cmd", "dance"}}).status == 400);
  CHECK(host.command(id, {{"cmd", "inspect"}, {"x", 0}, {"y", 0}}).status == 400);
  CHECK(host.command(id, {{"cmd", "report"}}).status == 200);
  const Reply again = host.command(id, {{"cmd", "report"}});
  CHECK(again.status == 409);
  CHECK(again.body["error"]["kind"] == "illegal-state");
  CHECK(host.command(id, {{"cmd", "quit"}}).status == 200);
  CHECK(host.command(id, {{"cmd", "move"}, {"dir", "n"}}).status == 409);
}

TEST_CASE("moving into a wall returns an empty diff and bump text") {
  SessionHost host({});
  const std::string id = create_id(host, {{"game", "station"}, {"seed", 7}});
  const WorldBundle b = generate_world(GameKind::Station, WorldSeed{7}, GenConfig{});
  Coord p = b.world.spawn;
  bool bumped = false;
  for (Coord d : kSteps) {
    int guard = 0;
    while (open_tile(b.world, p + d) && guard++ < 100) {
      REQUIRE(host.command(id, move_cmd(d)).status == 200);
      p = p + d;
    }
    if (b.world.in_bounds(p + d) && b.world.at(p + d).kind == TileKind::Wall) {
      const Reply r = host.command(id, move_cmd(d));
      REQUIRE(r.status == 200);
      CHECK(r.body["moved"] == false);
      CHECK(r.body["diff"]["added"].empty());
      CHECK(r.body["diff"]["removed"].empty());
      CHECK(!r.body["text"].get<std::string>().empty());
      bumped = true;
      break;
    }
  }
  CHECK(bumped);
}

TEST_CASE("reading a terminal then reporting") {
  SessionHost host({});
  const std::string id = create_id(host, {{"game", "station"}, {"seed", 7}});
  const WorldBundle b = generate_world(GameKind::Station, WorldSeed{7}, GenConfig{});
  REQUIRE(!b.terminals.empty());
  const Terminal& t = b.terminals.front();

  std::vector<std::uint8_t> passable(b.world.tiles.size());
  for (int y = 0; y < b.world.height; ++y) {
    for (int x = 0; x < b.world.width; ++x) passable[b.world.index({x, y})] = open_tile(b.world, {x, y});
  }
  const auto path = find_path(b.world.width, b.world.height, passable, b.world.spawn, t.position, true);
  REQUIRE(path.size() >= 1);
  Coord p = b.world.spawn;
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    REQUIRE(host.command(id, move_cmd(path[i] - p)).body["moved"] == true);
    p = path[i];
  }
  const Reply read = host.command(id, {{"cmd", "read"}, {"x", t.position.x}, {"y", t.position.y}});
  REQUIRE(read.status == 200);
  CHECK(read.body["message"]["timestamp"] == t.message.timestamp);
  CHECK(read.body["message"]["body"] == t.message.body);
  CHECK(find_sealed_keys(read.body).empty());

  const Reply report = host.command(id, {{"cmd", "report"}, {"entries", json::object()}});
  REQUIRE(report.status == 200);
  CHECK(report.body["score"] == 0);
  CHECK(report.body.contains("ground_truth"));
}

TEST_CASE("export strips the sealed section") {
  SessionHost host({});
  const std::string id = create_id(host, {{"game", "station"}, {"seed", 5}});
  const Reply r = host.export_world(id);
  REQUIRE(r.status == 200);
  REQUIRE(r.raw);
  CHECK(r.raw->find("ground_truth") == std::string::npos);
  const WorldBundle b = parse_world(*r.raw);
  CHECK(!b.ground_truth);
  CHECK(b.seed.value == 5);
  CHECK(host.export_world("nope").status == 404);
}

TEST_CASE("idle sessions expire after the ttl") {
  HostOptions o;
  o.ttl = std::chrono::seconds(60);
  SessionHost host(o);
  auto now = SessionHost::Clock::now();
  host.set_clock([&] { return now; });
  const std::string a = create_id(host, {{"game", "village"}, {"seed", 1}});
  const std::string b = create_id(host, {{"game", "village"}, {"seed", 2}});
  now += std::chrono::seconds(45);
  CHECK(host.command(b, {{"cmd", "sync"}}).status == 200);
  now += std::chrono::seconds(30);
  CHECK(host.expire_idle() == 1);
  CHECK(!host.exists(a));
  CHECK(host.exists(b));
  CHECK(host.command(a, {{"cmd", "sync"}}).status == 404);
  now += std::chrono::seconds(61);
  CHECK(host.command(b, {{"cmd", "sync"}}).status == 404);
  CHECK(host.size() == 0);
}

TEST_CASE("commands on one session never interleave") {
  SessionHost host({});
  const std::string id = create_id(host, {{"game", "village"}, {"seed", 9}});
  std::vector<std::thread> pool;
  for (int t = 0; t < 8; ++t) {
    pool.emplace_back([&, t] {
      for (int i = 0; i < 25; ++i) host.command(id, move_cmd(kSteps[(t + i) % 4]));
    });
  }
  for (auto& th : pool) th.join();
  const Reply q = host.command(id, {{"cmd", "quit"}});
  CHECK(q.body["summary"]["turns"] == 200);
}

TEST_CASE("router") {
  SessionHost host({});
  CHECK(route_http(host, "GET", "/health", "").status == 200);
  CHECK(route_http(host, "POST", "/health", "").status == 405);
  CHECK(route_http(host, "GET", "/nowhere", "").status == 404);
  CHECK(route_http(host, "POST", "/session", "{oops").status == 400);
  const Reply made = route_http(host, "POST", "/session", R"({"game":"village","seed":4})");
  REQUIRE(made.status == 201);
  const std::string id = made.body["session"];
  CHECK(route_http(host, "POST", "/session/" + id + "/cmd", R"({"cmd":"sync"})").status == 200);
  CHECK(route_http(host, "GET", "/session/" + id + "/export", "").raw.has_value());
  CHECK(route_http(host, "GET", "/session/" + id + "/live", "").status == 426);
  CHECK(route_http(host, "GET", "/session/zzz/live", "").status == 404);
  CHECK(live_channel_id("/session/" + id + "/live") == id);
  CHECK(!live_channel_id("/session/" + id));
}

TEST_CASE("live server: http endpoints") {
  LiveServer live;
  const Response health = request(live.port(), http::verb::get, "/health");
  CHECK(health.status == 200);
  const Response made = request(live.port(), http::verb::post, "/session", R"({"game":"station","seed":7})");
  REQUIRE(made.status == 201);
  const json created = made.parsed();
  CHECK(find_sealed_keys(created).empty());
  const std::string id = created["session"];

  const Response moved = request(live.port(), http::verb::post, "/session/" + id + "/cmd", R"({"cmd":"face","dir":"e"})");
  CHECK(moved.status == 200);
  CHECK(moved.parsed()["facing"]["dx"] == 1);

  const Response exported = request(live.port(), http::verb::get, "/session/" + id + "/export");
  CHECK(exported.status == 200);
  CHECK(exported.body.find("ground_truth") == std::string::npos);

  CHECK(request(live.port(), http::verb::post, "/session/nope/cmd", "{}").status == 404);
  CHECK(request(live.port(), http::verb::post, "/session/" + id + "/cmd", "{bad").status == 400);
  CHECK(request(live.port(), http::verb::post, "/session/" + id + "/cmd", R"({"cmd":"report"})").status == 200);
  CHECK(request(live.port(), http::verb::post, "/session/" + id + "/cmd", R"({"cmd":"report"})").status == 409);
}

TEST_CASE("live server: websocket channel carries diffs") {
  LiveServer live;
  const std::string id =
      request(live.port(), http::verb::post, "/session", R"({"game":"station","seed":7})").parsed()["session"];

  asio::io_context ioc;
  websocket::stream<tcp::socket> ws{ioc};
  ws.next_layer().connect({asio::ip::make_address("127.0.0.1"), live.port()});
  ws.handshake("127.0.0.1", "/session/" + id + "/live");
  auto send = [&](const std::string& frame) {
    ws.write(asio::buffer(frame));
    beast::flat_buffer buf;
    ws.read(buf);
    return json::parse(beast::buffers_to_string(buf.data()));
  };
  const json synced = send(R"({"cmd":"sync"})");
  CHECK(synced["ok"] == true);
  CHECK(synced.contains("view"));
  const json turned = send(R"({"cmd":"face","dir":"s"})");
  CHECK(turned.contains("diff"));
  CHECK(!turned.contains("view"));
  CHECK(find_sealed_keys(turned).empty());
  const json bad = send("not json");
  CHECK(bad["ok"] == false);
  CHECK(bad["status"] == 400);
  const json reported = send(R"({"cmd":"report"})");
  CHECK(reported.contains("ground_truth"));
  CHECK(send(R"({"cmd":"report"})")["status"] == 409);
  ws.close(websocket::close_code::normal);

  // Unknown sessions are refused before the upgrade.
  websocket::stream<tcp::socket> stray{ioc};
  stray.next_layer().connect({asio::ip::make_address("127.0.0.1"), live.port()});
  CHECK_THROWS(stray.handshake("127.0.0.1", "/session/nope/live"));
}

TEST_CASE("live server: 100 concurrent creates give 100 independent sessions") {
  LiveServer live;
  std::vector<std::thread> clients;
  std::mutex lock;
  std::set<std::string> ids;
  std::atomic<int> failures{0};
  std::atomic<int> leaks{0};
  for (int i = 0; i < 100; ++i) {
    clients.emplace_back([&, i] {
      try {
        const std::string game = i % 2 ? "station" : "village";
        const Response r = request(live.port(), http::verb::post, "/session",
                                   json{{"game", game}, {"seed", i}}.dump());
        if (r.status != 201) {
          ++failures;
          return;
        }
        const json body = r.parsed();
        if (!find_sealed_keys(body).empty() || r.body.find("fate") != std::string::npos) ++leaks;
        std::lock_guard<std::mutex> g(lock);
        ids.insert(body["session"].get<std::string>());
      } catch (const std::exception&) {
        ++failures;
      }
    });
  }
  for (auto& c : clients) c.join();
  CHECK(failures == 0);
  CHECK(leaks == 0);
  CHECK(ids.size() == 100);
  CHECK(live.host.size() == 100);

  // Moving in one session leaves another untouched.
  const std::string a = *ids.begin(), b = *ids.rbegin();
  const json before = live.host.command(b, {{"cmd", "sync"}}).body["view"];
  live.host.command(a, {{"cmd", "move"}, {"dir", "n"}});
  live.host.command(a, {{"cmd", "face"}, {"dir", "w"}});
  CHECK(live.host.command(b, {{"cmd", "sync"}}).body["view"] == before);
}
