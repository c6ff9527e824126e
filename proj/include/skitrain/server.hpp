#pragma once

#include <memory>
#include <string>

#include "skitrain/session.hpp"

namespace skitrain {

struct ServerOptions {
  std::string bind = "127.0.0.1:8080";  // host:port, port 0 picks a free one
  SessionConfig session;
  int threads = 1;
};

/// WebSocket session server: `/session` (text frames carrying the JSON
/// envelope), GET `/health` and GET `/levels`.
class Server {
 public:
  explicit Server(ServerOptions options);
  ~Server();
  Server(const Server&) = delete;
  Server& operator=(const Server&) = delete;

  /// Bound port, valid after construction.
  unsigned short port() const;
  /// Starts worker threads and returns.
  void start();
  /// Blocks until stop() or SIGINT/SIGTERM.
  void run();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace skitrain
