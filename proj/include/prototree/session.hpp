#pragma once

#include <string>
#include <string_view>

#include "prototree/dendrogram.hpp"
#include "prototree/tree_model.hpp"

namespace prototree {

inline constexpr int kSessionFormatVersion = 1;

/// A saved view bound to one dendrogram by digest.
struct Session {
  int format_version = kSessionFormatVersion;
  std::string dendrogram_digest;
  ViewState view;
  /// ISO-8601 UTC, second resolution.
  std::string created;
  std::string modified;

  friend bool operator==(const Session&, const Session&) = default;
};

std::string utc_timestamp_now();

Session make_session(const Dendrogram& dend, ViewState view);

/// JSON {format_version, dendrogram_digest, expanded, active_label_set,
/// created, modified}; `expanded` sorted ascending.
std::string serialize_session(const Session& session);

/// Parses without binding to a tree. Throws ValidationError for malformed
/// payloads and unknown versions.
Session parse_session(std::string_view bytes);

/// Also checks the digest against `dend` (DigestMismatchError) and the view's
/// closure.
Session deserialize_session(std::string_view bytes, const Dendrogram& dend);
/// Same, with the tree digest already known.
Session deserialize_session(std::string_view bytes, const Dendrogram& dend,
                            std::string_view digest);

}  // namespace prototree
