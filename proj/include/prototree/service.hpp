#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "prototree/dendrogram.hpp"
#include "prototree/labels.hpp"

namespace prototree {

struct ApiRequest {
  std::string method;
  std::string path;
  std::map<std::string, std::string> params;
  std::string body;
  std::string if_none_match;
};

struct ApiResponse {
  int status = 200;
  std::string body;
  std::string content_type = "application/json";
  std::map<std::string, std::string> headers;
};

/// Flat-file (or in-memory) store for session bodies keyed by the SHA-256 of
/// their bytes. Writes are serialized; reads are lock-free on disk.
class SessionStore {
 public:
  /// Empty path keeps sessions in memory.
  explicit SessionStore(std::filesystem::path dir = {});

  /// Returns the content-addressed id.
  std::string put(std::string_view body);
  std::optional<std::string> get(std::string_view id) const;

  static bool valid_id(std::string_view id);

 private:
  std::filesystem::path dir_;
  mutable std::mutex mutex_;
  std::map<std::string, std::string, std::less<>> memory_;
};

/// The JSON API over one immutable dendrogram. Transport-agnostic: the HTTP
/// server forwards requests to handle(), and tests call it directly.
///
///   GET  /api/tree?policy=topk|dynamic&k=&min_size=&depth=
///   GET  /api/node/{id}/children?depth=
///   GET  /api/search?q=&mode=exact|prefix
///   POST /api/session            GET /api/session/{id}
///   GET  /api/export?session={id}
///   GET  /api/labelsets          POST /api/labelsets/activate {"id": ...}
class TreeService {
 public:
  /// A service with no dendrogram answers tree endpoints with 409.
  /// `state_dir` holds saved sessions; empty keeps them in memory.
  explicit TreeService(std::filesystem::path state_dir = {});

  /// Binds `label_sets` to `dend`; the first complete set becomes active. With
  /// no label sets, an identity text set named "default" is added.
  void load(Dendrogram dend, std::vector<LabelSet> label_sets);

  ApiResponse handle(const ApiRequest& request);

  /// Null when nothing is loaded.
  std::shared_ptr<const Dendrogram> dendrogram() const;
  std::string digest() const;

 private:
  struct Loaded;
  struct Active;

  ApiResponse get_tree(const ApiRequest& req) const;
  ApiResponse get_children(const ApiRequest& req, std::string_view id_text) const;
  ApiResponse get_search(const ApiRequest& req) const;
  ApiResponse post_session(const ApiRequest& req);
  ApiResponse get_session(std::string_view id) const;
  ApiResponse get_export(const ApiRequest& req) const;
  ApiResponse get_labelsets() const;
  ApiResponse post_activate(const ApiRequest& req);

  std::shared_ptr<const Loaded> loaded() const;
  std::shared_ptr<const Active> active() const;

  SessionStore sessions_;
  mutable std::mutex mutex_;
  std::shared_ptr<const Loaded> loaded_;
  // Swapped as a whole on activation.
  std::shared_ptr<const Active> active_;
};

}  // namespace prototree
