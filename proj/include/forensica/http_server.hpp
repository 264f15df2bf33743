#pragma once

#include <atomic>
#include <list>
#include <memory>
#include <mutex>
#include <string>
#include <thread>

#include "forensica/service.hpp"

namespace forensica {

// Blocking HTTP/1.1 + WebSocket front end over a SessionHost. One thread per
// connection; the host does the per-session serialization.
class HttpServer {
 public:
  // Port 0 picks a free port; see port().
  HttpServer(SessionHost& host, const std::string& address, unsigned short port);
  ~HttpServer();

  unsigned short port() const { return port_; }

  // Accept loop; returns after stop().
  void run();
  // Safe from any thread. Closes the listener and every open connection.
  void stop();

 private:
  struct Impl;
  struct Connection;
  void serve(std::shared_ptr<Connection> conn);

  SessionHost& host_;
  std::unique_ptr<Impl> impl_;
  unsigned short port_ = 0;
  std::atomic<bool> stopping_{false};
  std::mutex conn_lock_;
  std::list<std::shared_ptr<Connection>> conns_;
  std::list<std::thread> threads_;
};

}  // namespace forensica
