#include "prototree/http_server.hpp"

#include <httplib.h>

namespace prototree {

struct HttpServer::Impl {
  explicit Impl(TreeService& s) : service(s) {}
  TreeService& service;
  httplib::Server server;
};

HttpServer::HttpServer(TreeService& service, Options options)
    : impl_(std::make_unique<Impl>(service)) {
  auto& server = impl_->server;
  // SO_REUSEADDR only, so binding a port that is already in use fails.
  server.set_socket_options([](socket_t sock) {
    int yes = 1;
    setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof(yes));
  });
  const auto forward = [this](const httplib::Request& req, httplib::Response& res) {
    ApiRequest api{req.method, req.path, {}, req.body, req.get_header_value("If-None-Match")};
    for (const auto& [key, value] : req.params) api.params.emplace(key, value);
    const ApiResponse out = impl_->service.handle(api);
    res.status = out.status;
    for (const auto& [key, value] : out.headers) res.set_header(key, value);
    if (out.status != 304) res.set_content(out.body, out.content_type);
  };
  server.Get(R"(/api/.*)", forward);
  server.Post(R"(/api/.*)", forward);
  for (const auto& dir : options.asset_dirs) server.set_mount_point("/assets", dir.string());
  if (!options.ui_dir.empty()) server.set_mount_point("/", options.ui_dir.string());
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind(const std::string& host, int port) {
  if (port == 0) return impl_->server.bind_to_any_port(host);
  return impl_->server.bind_to_port(host, port) ? port : -1;
}

void HttpServer::listen() { impl_->server.listen_after_bind(); }

void HttpServer::stop() {
  if (impl_) impl_->server.stop();
}

void HttpServer::wait_until_ready() const { impl_->server.wait_until_ready(); }

}  // namespace prototree
