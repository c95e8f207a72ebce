#include <csignal>
#include <cstdlib>
#include <iostream>

#include <CLI11.hpp>

#include "terraroute/http_server.hpp"
#include "terraroute/scenario.hpp"
#include "terraroute/service.hpp"
#include "terraroute/terrain.hpp"

namespace {
terraroute::HttpServer* g_server = nullptr;

void on_signal(int) {
  if (g_server) g_server->stop();
}
}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"HTTP planning service", "terraroute-serve"};
  std::string host = "127.0.0.1";
  int port = 8080;
  if (const char* env = std::getenv("TERRAROUTE_PORT")) port = std::atoi(env);
  std::string terrain;
  app.add_option("--host", host, "Bind address");
  app.add_option("--port", port, "Port (default 8080, or $TERRAROUTE_PORT)");
  app.add_option("--terrain", terrain, "ESRI ASCII grid to preload");
  CLI11_PARSE(app, argc, argv);

  terraroute::PlannerService service;
  try {
    if (!terrain.empty()) service.load_terrain(terraroute::read_ascii_grid(terrain));
    terraroute::HttpServer server(service);
    const int bound = server.bind(host, port);
    g_server = &server;
    std::signal(SIGINT, on_signal);
    std::signal(SIGTERM, on_signal);
    std::cerr << "listening on http://" << host << ":" << bound << "\n";
    server.serve();
    g_server = nullptr;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
