#include "forensica/http_server.hpp"

#include <iostream>

#include <boost/asio/ip/tcp.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/http.hpp>
#include <boost/beast/websocket.hpp>

namespace forensica {

namespace asio = boost::asio;
namespace beast = boost::beast;
namespace http = beast::http;
namespace websocket = beast::websocket;
using tcp = asio::ip::tcp;

struct HttpServer::Impl {
  asio::io_context ioc{1};
  tcp::acceptor acceptor{ioc};
  tcp::endpoint wake;  // where stop() connects to unblock accept()
};

struct HttpServer::Connection {
  explicit Connection(tcp::socket s) : socket(std::move(s)) {}
  tcp::socket socket;
  std::mutex lock;
  std::atomic<bool> closed{false};

  void close() {
    std::lock_guard<std::mutex> g(lock);
    if (closed.exchange(true)) return;
    beast::error_code ec;
    socket.shutdown(tcp::socket::shutdown_both, ec);
  }
};

HttpServer::HttpServer(SessionHost& host, const std::string& address, unsigned short port)
    : host_(host), impl_(std::make_unique<Impl>()) {
  const tcp::endpoint ep{asio::ip::make_address(address), port};
  impl_->acceptor.open(ep.protocol());
  impl_->acceptor.set_option(asio::socket_base::reuse_address(true));
  impl_->acceptor.bind(ep);
  impl_->acceptor.listen(asio::socket_base::max_listen_connections);
  port_ = impl_->acceptor.local_endpoint().port();
  auto addr = impl_->acceptor.local_endpoint().address();
  if (addr.is_unspecified()) {
    addr = addr.is_v6() ? asio::ip::address(asio::ip::address_v6::loopback())
                        : asio::ip::address(asio::ip::address_v4::loopback());
  }
  impl_->wake = tcp::endpoint{addr, port_};
}

HttpServer::~HttpServer() {
  stop();
  for (auto& t : threads_) {
    if (t.joinable()) t.join();
  }
}

void HttpServer::stop() {
  if (stopping_.exchange(true)) return;
  {
    std::lock_guard<std::mutex> g(conn_lock_);
    for (auto& c : conns_) c->close();
  }
  // A blocking accept() does not notice the acceptor closing under it, so
  // knock on the door once; run() sees the flag and closes the listener.
  beast::error_code ec;
  asio::io_context ioc;
  tcp::socket poke{ioc};
  poke.connect(impl_->wake, ec);
}

void HttpServer::run() {
  while (!stopping_) {
    tcp::socket socket{impl_->ioc};
    beast::error_code ec;
    impl_->acceptor.accept(socket, ec);
    if (ec || stopping_) {
      if (stopping_) break;
      continue;
    }
    auto conn = std::make_shared<Connection>(std::move(socket));
    std::lock_guard<std::mutex> g(conn_lock_);
    if (stopping_) {
      conn->close();
      break;
    }
    // Reap finished connections so long runs don't accumulate them.
    for (auto it = conns_.begin(); it != conns_.end();) {
      it = (*it)->closed ? conns_.erase(it) : std::next(it);
    }
    conns_.push_back(conn);
    threads_.emplace_back([this, conn] { serve(conn); });
  }
  beast::error_code ec;
  impl_->acceptor.close(ec);
  for (auto& t : threads_) {
    if (t.joinable()) t.join();
  }
  threads_.clear();
}

namespace {

http::response<http::string_body> make_response(const Reply& r, unsigned version, bool keep_alive) {
  http::response<http::string_body> res{static_cast<http::status>(r.status), version};
  res.set(http::field::server, "forensica");
  res.set(http::field::content_type, "application/json");
  res.set(http::field::access_control_allow_origin, "*");
  res.keep_alive(keep_alive);
  res.body() = r.raw ? *r.raw : r.body.dump();
  res.prepare_payload();
  return res;
}

void run_live(SessionHost& host, const std::string& id, tcp::socket& socket,
              const http::request<http::string_body>& req) {
  websocket::stream<tcp::socket&> ws{socket};
  ws.set_option(websocket::stream_base::timeout::suggested(beast::role_type::server));
  ws.accept(req);
  ws.text(true);
  beast::flat_buffer buf;
  for (;;) {
    beast::error_code ec;
    ws.read(buf, ec);
    if (ec) return;
    const std::string frame = beast::buffers_to_string(buf.data());
    buf.consume(buf.size());
    ws.write(asio::buffer(handle_live_frame(host, id, frame)), ec);
    if (ec) return;
  }
}

}  // namespace

void HttpServer::serve(std::shared_ptr<Connection> conn) {
  beast::flat_buffer buf;
  try {
    for (;;) {
      http::request<http::string_body> req;
      beast::error_code ec;
      http::read(conn->socket, buf, req, ec);
      if (ec) break;
      const std::string target(req.target());
      if (websocket::is_upgrade(req)) {
        const auto id = live_channel_id(target);
        if (id && host_.exists(*id)) {
          run_live(host_, *id, conn->socket, req);
          break;
        }
        Reply r = route_http(host_, "GET", target, "");
        if (r.status == 426) r = Reply{404, {{"ok", false}, {"error", {{"kind", "not-found"}}}}, std::nullopt};
        http::write(conn->socket, make_response(r, req.version(), false), ec);
        break;
      }
      if (req.method() == http::verb::options) {
        // CORS preflight from the browser client.
        Reply r{204, nlohmann::json(), std::string()};
        auto res = make_response(r, req.version(), req.keep_alive());
        res.set(http::field::access_control_allow_methods, "GET, POST, OPTIONS");
        res.set(http::field::access_control_allow_headers, "Content-Type");
        http::write(conn->socket, res, ec);
      } else {
        const Reply r = route_http(host_, std::string(req.method_string()), target, req.body());
        http::write(conn->socket, make_response(r, req.version(), req.keep_alive()), ec);
      }
      if (ec || !req.keep_alive()) break;
    }
  } catch (const std::exception& e) {
    if (!stopping_) std::cerr << "forensica-service: connection error: " << e.what() << "\n";
  }
  conn->close();
}

}  // namespace forensica
