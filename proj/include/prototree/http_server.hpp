#pragma once

#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "prototree/service.hpp"

namespace prototree {

/// cpp-httplib front end for TreeService plus static routes: `/assets/*` from
/// each asset directory (searched in order) and, optionally, the UI bundle
/// at `/`.
class HttpServer {
 public:
  struct Options {
    std::vector<std::filesystem::path> asset_dirs;
    std::filesystem::path ui_dir;
  };

  HttpServer(TreeService& service, Options options);
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  /// Port 0 picks a free port. Returns the bound port, or -1 on failure.
  int bind(const std::string& host, int port);
  /// Blocks until stop().
  void listen();
  void stop();
  void wait_until_ready() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace prototree
