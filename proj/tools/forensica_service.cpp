// Session service: HTTP + WebSocket host for the investigation protocol.
#include <csignal>
#include <iostream>
#include <thread>

#include "CLI11.hpp"

#include "forensica/config.hpp"
#include "forensica/error.hpp"
#include "forensica/http_server.hpp"

using namespace forensica;

int main(int argc, char** argv) {
  CLI::App app{"forensica-service: host investigation sessions over HTTP and WebSocket"};
  std::string bind = "127.0.0.1";
  unsigned short port = 8080;
  int ttl = 1800;
  std::string config_path;
  app.add_option("--bind", bind, "listen address");
  app.add_option("--port", port, "listen port (0 picks one)");
  app.add_option("--ttl", ttl, "idle session lifetime in seconds")->check(CLI::PositiveNumber);
  app.add_option("--config", config_path, "JSON generation config");
  CLI11_PARSE(app, argc, argv);

  // Signals are handled by a dedicated thread, so block them everywhere first.
  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  try {
    HostOptions opts;
    if (!config_path.empty()) opts.config = load_config_file(config_path);
    opts.ttl = std::chrono::seconds(ttl);
    SessionHost host(opts);
    HttpServer server(host, bind, port);
    std::cout << "listening on " << bind << ":" << server.port() << " (ttl " << ttl << " s)" << std::endl;

    std::thread watcher([&] {
      const timespec tick{5, 0};
      for (;;) {
        if (sigtimedwait(&signals, nullptr, &tick) > 0) break;
        host.expire_idle();
      }
      server.stop();
    });
    server.run();
    watcher.join();
  } catch (const Error& e) {
    std::cerr << "error (" << error_kind_name(e.kind()) << "): " << e.what() << "\n";
    return e.kind() == ErrorKind::InvalidConfig ? 2 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
