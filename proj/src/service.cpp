#include "prototree/service.hpp"

#include <json.hpp>

#include <charconv>
#include <fstream>

#include "prototree/digest.hpp"
#include "prototree/error.hpp"
#include "prototree/matrix_io.hpp"
#include "prototree/session.hpp"
#include "prototree/tree_io.hpp"
#include "prototree/tree_model.hpp"

namespace prototree {

using nlohmann::json;

struct TreeService::Loaded {
  Dendrogram dend;
  std::string digest;
  std::vector<LabelSet> sets;
};

struct TreeService::Active {
  BoundLabels labels;
  /// Labels matched by search: the display text for text sets, otherwise the
  /// observation labels.
  std::vector<std::string> search_labels;
};

namespace {

constexpr int kDefaultPayloadDepth = 2;
constexpr int kDefaultChildrenDepth = 1;
constexpr std::size_t kDefaultTopK = 10;

class HttpError : public std::runtime_error {
 public:
  HttpError(int status, const std::string& message) : std::runtime_error(message), status_(status) {}
  int status() const noexcept { return status_; }

 private:
  int status_;
};

ApiResponse json_response(const json& body, int status = 200) {
  return {status, body.dump(), "application/json", {}};
}

ApiResponse error_response(int status, std::string_view message) {
  return json_response(json{{"error", message}}, status);
}

template <typename T>
std::optional<T> param(const ApiRequest& req, const std::string& key) {
  const auto it = req.params.find(key);
  if (it == req.params.end() || it->second.empty()) return std::nullopt;
  T value{};
  const std::string& text = it->second;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || end != text.data() + text.size()) {
    throw HttpError(400, "parameter '" + key + "' is not a valid number");
  }
  return value;
}

std::string string_param(const ApiRequest& req, const std::string& key, std::string fallback = {}) {
  const auto it = req.params.find(key);
  return it == req.params.end() ? std::move(fallback) : it->second;
}

json node_payload(const Dendrogram& dend, const BoundLabels& labels, NodeId id,
                  const std::set<NodeId>& expanded, int prefetch) {
  const bool interior = !dend.is_leaf(id);
  const bool open = interior && expanded.contains(id);
  const LeafId proto = dend.prototype(id);
  json node{{"id", id},
            {"height", dend.height(id)},
            {"size", dend.size(id)},
            {"label", labels.display[proto]},
            {"show_label", shows_label(dend, id)},
            {"collapsed", interior && !open},
            {"has_children", interior}};
  if (labels.kind == LabelKind::image) node["image"] = "/assets/" + labels.display[proto];
  if (labels.tooltips[proto]) node["tooltip"] = *labels.tooltips[proto];
  if (interior && (open || prefetch > 0)) {
    const Merge& m = dend.merge_of(id);
    const int next = open ? prefetch : prefetch - 1;
    node["children"] = json::array({node_payload(dend, labels, m.left, expanded, next),
                                    node_payload(dend, labels, m.right, expanded, next)});
  }
  return node;
}

NodeId parse_node_id(std::string_view text, const Dendrogram& dend) {
  NodeId id = 0;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), id);
  if (ec != std::errc() || end != text.data() + text.size() || id >= dend.node_count()) {
    throw HttpError(404, "unknown node " + std::string(text));
  }
  return id;
}

}  // namespace

SessionStore::SessionStore(std::filesystem::path dir) : dir_(std::move(dir)) {
  if (!dir_.empty()) std::filesystem::create_directories(dir_);
}

bool SessionStore::valid_id(std::string_view id) {
  return id.size() == 64 &&
         id.find_first_not_of("0123456789abcdef") == std::string_view::npos;
}

std::string SessionStore::put(std::string_view body) {
  std::string id = sha256_hex(body);
  std::lock_guard lock(mutex_);
  if (dir_.empty()) {
    memory_.emplace(id, body);
  } else {
    const auto final_path = dir_ / (id + ".json");
    if (!std::filesystem::exists(final_path)) {
      const auto tmp = dir_ / (id + ".tmp");
      write_file(tmp, body);
      std::filesystem::rename(tmp, final_path);
    }
  }
  return id;
}

std::optional<std::string> SessionStore::get(std::string_view id) const {
  if (!valid_id(id)) return std::nullopt;
  if (dir_.empty()) {
    std::lock_guard lock(mutex_);
    const auto it = memory_.find(id);
    if (it == memory_.end()) return std::nullopt;
    return it->second;
  }
  const auto path = dir_ / (std::string(id) + ".json");
  if (!std::filesystem::is_regular_file(path)) return std::nullopt;
  return read_file(path);
}

TreeService::TreeService(std::filesystem::path state_dir) : sessions_(std::move(state_dir)) {}

void TreeService::load(Dendrogram dend, std::vector<LabelSet> label_sets) {
  if (label_sets.empty()) label_sets.push_back(identity_label_set(dend));
  std::shared_ptr<const Active> first;
  for (const LabelSet& set : label_sets) {
    if (missing_leaves(set, dend).empty()) {
      first = std::make_shared<Active>(Active{bind_labels(set, dend), {}});
      break;
    }
  }
  if (!first) throw ValidationError("no label set covers every leaf");
  auto active = std::make_shared<Active>(*first);
  active->search_labels =
      active->labels.kind == LabelKind::text ? active->labels.display : dend.labels();
  std::string digest = tree_digest(dend);
  auto loaded = std::make_shared<Loaded>(Loaded{std::move(dend), std::move(digest), std::move(label_sets)});
  std::lock_guard lock(mutex_);
  loaded_ = std::move(loaded);
  active_ = std::move(active);
}

std::shared_ptr<const TreeService::Loaded> TreeService::loaded() const {
  std::lock_guard lock(mutex_);
  if (!loaded_) throw HttpError(409, "no dendrogram loaded");
  return loaded_;
}

std::shared_ptr<const TreeService::Active> TreeService::active() const {
  std::lock_guard lock(mutex_);
  return active_;
}

std::shared_ptr<const Dendrogram> TreeService::dendrogram() const {
  std::lock_guard lock(mutex_);
  if (!loaded_) return nullptr;
  return {loaded_, &loaded_->dend};
}

std::string TreeService::digest() const {
  std::lock_guard lock(mutex_);
  return loaded_ ? loaded_->digest : std::string{};
}

ApiResponse TreeService::handle(const ApiRequest& req) {
  try {
    const std::string_view path = req.path;
    const bool get = req.method == "GET";
    const bool post = req.method == "POST";
    if (get && path == "/api/tree") return get_tree(req);
    if (get && path == "/api/search") return get_search(req);
    if (get && path == "/api/export") return get_export(req);
    if (get && path == "/api/labelsets") return get_labelsets();
    if (post && path == "/api/labelsets/activate") return post_activate(req);
    if (post && path == "/api/session") return post_session(req);
    constexpr std::string_view kSession = "/api/session/";
    if (get && path.starts_with(kSession)) return get_session(path.substr(kSession.size()));
    constexpr std::string_view kNode = "/api/node/";
    constexpr std::string_view kChildren = "/children";
    if (get && path.starts_with(kNode) && path.ends_with(kChildren) &&
        path.size() > kNode.size() + kChildren.size()) {
      return get_children(req, path.substr(kNode.size(), path.size() - kNode.size() - kChildren.size()));
    }
    return error_response(404, "no route for " + req.method + " " + req.path);
  } catch (const HttpError& e) {
    return error_response(e.status(), e.what());
  } catch (const DigestMismatchError& e) {
    return error_response(409, e.what());
  } catch (const NotFoundError& e) {
    return error_response(404, e.what());
  } catch (const ValidationError& e) {
    return error_response(400, e.what());
  } catch (const std::exception& e) {
    return error_response(500, e.what());
  }
}

ApiResponse TreeService::get_tree(const ApiRequest& req) const {
  const auto l = loaded();
  const auto a = active();
  const Dendrogram& dend = l->dend;
  const std::string policy = string_param(req, "policy", "topk");
  const int depth = param<int>(req, "depth").value_or(kDefaultPayloadDepth);
  if (depth < 0) throw HttpError(400, "depth must be >= 0");
  Clustering initial;
  if (policy == "topk") {
    const auto k = param<long long>(req, "k").value_or(static_cast<long long>(kDefaultTopK));
    if (k < 1) throw HttpError(400, "k must be >= 1");
    initial = cut_top_k(dend, std::min<std::size_t>(static_cast<std::size_t>(k), dend.leaf_count()));
  } else if (policy == "dynamic") {
    const auto min_size = param<long long>(req, "min_size");
    if (!min_size || *min_size < 1) throw HttpError(400, "dynamic policy needs min_size >= 1");
    initial = dynamic_cut(dend, static_cast<std::size_t>(*min_size));
  } else {
    throw HttpError(400, "unknown policy '" + policy + "'");
  }
  const ViewState view = view_for_clustering(dend, initial, a->labels.id);
  json body{{"digest", l->digest},
            {"root_height", dend.height(dend.root())},
            {"label_set", a->labels.id},
            {"label_kind", to_string(a->labels.kind)},
            {"expanded", std::vector<NodeId>(view.expanded.begin(), view.expanded.end())},
            {"tree", node_payload(dend, a->labels, dend.root(), view.expanded, depth)}};
  return json_response(body);
}

ApiResponse TreeService::get_children(const ApiRequest& req, std::string_view id_text) const {
  const auto l = loaded();
  const auto a = active();
  const NodeId id = parse_node_id(id_text, l->dend);
  if (l->dend.is_leaf(id)) throw HttpError(400, "node " + std::to_string(id) + " is a leaf");
  const int depth = param<int>(req, "depth").value_or(kDefaultChildrenDepth);
  if (depth < 0) throw HttpError(400, "depth must be >= 0");
  const std::string etag = "\"" + l->digest + "-" + a->labels.id + "-" + std::to_string(id) + "-" +
                           std::to_string(depth) + "\"";
  ApiResponse response;
  if (req.if_none_match == etag) {
    response.status = 304;
  } else {
    response = json_response(node_payload(l->dend, a->labels, id, {}, depth));
  }
  response.headers["ETag"] = etag;
  response.headers["Cache-Control"] = "no-cache";
  return response;
}

ApiResponse TreeService::get_search(const ApiRequest& req) const {
  const auto l = loaded();
  const auto a = active();
  const std::string query = string_param(req, "q");
  if (query.empty()) throw HttpError(400, "empty query");
  const std::string mode = string_param(req, "mode", "exact");
  if (mode == "prefix") return json_response(json{{"matches", prefix_matches(a->search_labels, query)}});
  if (mode != "exact") throw HttpError(400, "unknown search mode '" + mode + "'");
  const auto hit = search_highest(l->dend, query, a->search_labels);
  if (!hit) return json_response(json::object());
  return json_response(json{{"node", hit->node}, {"path", hit->path}});
}

ApiResponse TreeService::post_session(const ApiRequest& req) {
  const auto l = loaded();
  deserialize_session(req.body, l->dend, l->digest);
  const std::string id = sessions_.put(req.body);
  return json_response(json{{"id", id}}, 201);
}

ApiResponse TreeService::get_session(std::string_view id) const {
  const auto body = sessions_.get(id);
  if (!body) throw HttpError(404, "unknown session " + std::string(id));
  return {200, *body, "application/json", {}};
}

ApiResponse TreeService::get_export(const ApiRequest& req) const {
  const auto l = loaded();
  const std::string id = string_param(req, "session");
  if (id.empty()) throw HttpError(400, "missing session parameter");
  const auto body = sessions_.get(id);
  if (!body) throw HttpError(404, "unknown session " + id);
  const Session s = deserialize_session(*body, l->dend, l->digest);
  ApiResponse response{200, cluster_table_csv(l->dend, export_clusters(l->dend, s.view)), "text/csv", {}};
  response.headers["Content-Disposition"] = "attachment; filename=\"clusters.csv\"";
  return response;
}

ApiResponse TreeService::get_labelsets() const {
  const auto l = loaded();
  const auto a = active();
  json sets = json::array();
  for (const LabelSet& set : l->sets) {
    sets.push_back({{"id", set.id},
                    {"kind", to_string(set.kind)},
                    {"complete", missing_leaves(set, l->dend).empty()}});
  }
  return json_response(json{{"active", a->labels.id}, {"label_sets", std::move(sets)}});
}

ApiResponse TreeService::post_activate(const ApiRequest& req) {
  const auto l = loaded();
  std::string id;
  try {
    id = json::parse(req.body).at("id").get<std::string>();
  } catch (const json::exception&) {
    throw HttpError(400, "body must be {\"id\": <label set id>}");
  }
  const auto it = std::find_if(l->sets.begin(), l->sets.end(),
                               [&](const LabelSet& s) { return s.id == id; });
  if (it == l->sets.end()) throw HttpError(404, "unknown label set '" + id + "'");
  if (const auto missing = missing_leaves(*it, l->dend); !missing.empty()) {
    return json_response(json{{"error", "label set '" + id + "' is incomplete"}, {"missing", missing}}, 422);
  }
  auto next = std::make_shared<Active>(Active{bind_labels(*it, l->dend), {}});
  next->search_labels = next->labels.kind == LabelKind::text ? next->labels.display : l->dend.labels();
  {
    std::lock_guard lock(mutex_);
    active_ = std::move(next);
  }
  return json_response(json{{"active", id}});
}

}  // namespace prototree
