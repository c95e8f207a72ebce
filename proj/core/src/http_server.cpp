#include "terraroute/http_server.hpp"

#include <httplib.h>

#include "terraroute/errors.hpp"

namespace terraroute {

struct HttpServer::Impl {
  PlannerService& service;
  httplib::Server server;

  explicit Impl(PlannerService& s) : service(s) {}

  void forward(const httplib::Request& req, httplib::Response& res) {
    const ServiceResponse out = service.handle(req.method, req.path, req.body);
    res.status = out.status;
    res.set_content(out.body, out.content_type);
  }
};

HttpServer::HttpServer(PlannerService& service) : impl_(std::make_unique<Impl>(service)) {
  auto& srv = impl_->server;
  srv.set_default_headers({{"Access-Control-Allow-Origin", "*"},
                           {"Access-Control-Allow-Methods", "GET, PUT, POST, DELETE, OPTIONS"},
                           {"Access-Control-Allow-Headers", "Content-Type"}});
  // Fixed routes would make httplib answer 404 for a known path with the
  // wrong method; route everything through the service instead.
  const auto handler = [this](const httplib::Request& req, httplib::Response& res) { impl_->forward(req, res); };
  srv.Get(".*", handler);
  srv.Put(".*", handler);
  srv.Post(".*", handler);
  srv.Delete(".*", handler);
  srv.Options(".*", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });
  srv.set_payload_max_length(256ULL * 1024 * 1024);
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind(const std::string& host, int port) {
  int bound = port;
  if (port == 0) {
    bound = impl_->server.bind_to_any_port(host);
  } else if (!impl_->server.bind_to_port(host, port)) {
    bound = -1;
  }
  if (bound < 0) throw Error("cannot bind " + host + ":" + std::to_string(port));
  return bound;
}

void HttpServer::serve() { impl_->server.listen_after_bind(); }

void HttpServer::stop() {
  if (impl_->server.is_running()) impl_->server.stop();
}

bool HttpServer::running() const { return impl_->server.is_running(); }

}  // namespace terraroute
