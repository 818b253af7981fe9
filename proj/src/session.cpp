#include "prototree/session.hpp"

#include <json.hpp>

#include <chrono>
#include <ctime>

#include "prototree/error.hpp"
#include "prototree/tree_io.hpp"

namespace prototree {

using nlohmann::ordered_json;

std::string utc_timestamp_now() {
  const auto now = std::chrono::floor<std::chrono::seconds>(std::chrono::system_clock::now());
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

Session make_session(const Dendrogram& dend, ViewState view) {
  validate_view(dend, view);
  const std::string now = utc_timestamp_now();
  return {kSessionFormatVersion, tree_digest(dend), std::move(view), now, now};
}

std::string serialize_session(const Session& session) {
  ordered_json doc;
  doc["format_version"] = session.format_version;
  doc["dendrogram_digest"] = session.dendrogram_digest;
  doc["expanded"] = std::vector<NodeId>(session.view.expanded.begin(), session.view.expanded.end());
  doc["active_label_set"] = session.view.active_label_set;
  doc["created"] = session.created;
  doc["modified"] = session.modified;
  return doc.dump();
}

Session parse_session(std::string_view bytes) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(bytes);
  } catch (const ordered_json::parse_error& e) {
    throw ValidationError(std::string("malformed session: ") + e.what());
  }
  if (!doc.is_object()) throw ValidationError("malformed session: not a JSON object");
  Session s;
  try {
    s.format_version = doc.at("format_version").get<int>();
    if (s.format_version != kSessionFormatVersion) {
      throw ValidationError("unknown session format_version " + std::to_string(s.format_version));
    }
    s.dendrogram_digest = doc.at("dendrogram_digest").get<std::string>();
    for (const auto& id : doc.at("expanded")) {
      if (!id.is_number_unsigned()) throw ValidationError("malformed session: bad node id in expanded");
      s.view.expanded.insert(id.get<NodeId>());
    }
    s.view.active_label_set = doc.value("active_label_set", std::string{});
    s.created = doc.value("created", std::string{});
    s.modified = doc.value("modified", std::string{});
  } catch (const ordered_json::exception& e) {
    throw ValidationError(std::string("malformed session: ") + e.what());
  }
  return s;
}

Session deserialize_session(std::string_view bytes, const Dendrogram& dend,
                            std::string_view digest) {
  Session s = parse_session(bytes);
  if (s.dendrogram_digest != digest) {
    throw DigestMismatchError("session belongs to dendrogram " + s.dendrogram_digest +
                              ", loaded dendrogram is " + std::string(digest));
  }
  validate_view(dend, s.view);
  return s;
}

Session deserialize_session(std::string_view bytes, const Dendrogram& dend) {
  return deserialize_session(bytes, dend, tree_digest(dend));
}

}  // namespace prototree
