#pragma once

#include <memory>
#include <string>

#include "terraroute/service.hpp"

namespace terraroute {

// Binds a PlannerService to a socket. CORS is open so a browser client on
// another origin can call the API.
class HttpServer {
 public:
  explicit HttpServer(PlannerService& service);
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  // Port 0 picks a free port. Returns the bound port; throws Error if the
  // address cannot be bound.
  int bind(const std::string& host, int port);
  // Blocks until stop() is called from another thread.
  void serve();
  void stop();
  bool running() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace terraroute
