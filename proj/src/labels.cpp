#include "prototree/labels.hpp"

#include <json.hpp>

#include <set>

#include "prototree/dendrogram.hpp"
#include "prototree/error.hpp"
#include "prototree/matrix_io.hpp"

namespace prototree {

using nlohmann::json;

const char* to_string(LabelKind kind) noexcept {
  return kind == LabelKind::image ? "image" : "text";
}

LabelSet parse_label_manifest(std::string_view json_text) {
  // Duplicate keys are lost by a plain parse, so collect them with a callback.
  // Entry keys are the keys at depth 2 (inside the "entries" object).
  std::vector<std::string> duplicates;
  std::set<std::string> entry_keys;
  json doc;
  try {
    doc = json::parse(json_text, [&](int depth, json::parse_event_t event, json& parsed) {
      if (event == json::parse_event_t::object_start && depth == 1) {
        entry_keys.clear();
      } else if (event == json::parse_event_t::key && depth == 2) {
        if (!entry_keys.insert(parsed.get<std::string>()).second) {
          duplicates.push_back(parsed.get<std::string>());
        }
      }
      return true;
    });
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("label manifest is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ValidationError("label manifest must be a JSON object");
  if (!duplicates.empty()) {
    throw ValidationError("label manifest has duplicate entry for leaf '" + duplicates.front() + "'");
  }

  LabelSet set;
  try {
    set.id = doc.at("id").get<std::string>();
    const auto kind = doc.at("kind").get<std::string>();
    if (kind == "text") {
      set.kind = LabelKind::text;
    } else if (kind == "image") {
      set.kind = LabelKind::image;
    } else {
      throw ValidationError("unknown label kind '" + kind + "'");
    }
    if (doc.contains("assets_root") && !doc["assets_root"].is_null()) {
      set.assets_root = doc["assets_root"].get<std::string>();
    }
    const char* value_key = set.kind == LabelKind::image ? "image" : "label";
    for (const auto& [leaf, entry] : doc.at("entries").items()) {
      LabelEntry e;
      if (entry.is_string()) {
        e.value = entry.get<std::string>();
      } else {
        if (!entry.contains(value_key)) {
          throw ValidationError("entry '" + leaf + "' has no '" + value_key + "' field");
        }
        e.value = entry.at(value_key).get<std::string>();
        if (entry.contains("tooltip")) e.tooltip = entry.at("tooltip").get<std::string>();
      }
      set.entries.emplace(leaf, std::move(e));
    }
  } catch (const json::exception& e) {
    throw ValidationError(std::string("label manifest: ") + e.what());
  }
  if (set.id.empty()) throw ValidationError("label manifest has an empty id");
  return set;
}

LabelSet load_label_manifest(const std::filesystem::path& path) {
  LabelSet set = parse_label_manifest(read_file(path));
  if (set.assets_root && std::filesystem::path(*set.assets_root).is_relative()) {
    set.assets_root = (path.parent_path() / *set.assets_root).lexically_normal().string();
  }
  return set;
}

LabelSet identity_label_set(const Dendrogram& dend, std::string id) {
  LabelSet set{std::move(id), LabelKind::text, std::nullopt, {}};
  for (const auto& label : dend.labels()) set.entries.emplace(label, LabelEntry{label, std::nullopt});
  return set;
}

std::vector<std::string> missing_leaves(const LabelSet& set, const Dendrogram& dend) {
  std::vector<std::string> missing;
  for (LeafId leaf : dend.order()) {
    if (!set.entries.contains(dend.labels()[leaf])) missing.push_back(dend.labels()[leaf]);
  }
  return missing;
}

BoundLabels bind_labels(const LabelSet& set, const Dendrogram& dend) {
  if (const auto missing = missing_leaves(set, dend); !missing.empty()) {
    std::string list;
    for (const auto& m : missing) list += (list.empty() ? "" : ", ") + json(m).dump();
    throw ValidationError("label set '" + set.id + "' is missing leaves [" + list + "]");
  }
  BoundLabels bound{set.id, set.kind, {}, {}};
  bound.display.reserve(dend.leaf_count());
  for (const auto& label : dend.labels()) {
    const LabelEntry& e = set.entries.at(label);
    bound.display.push_back(e.value);
    bound.tooltips.push_back(e.tooltip);
  }
  return bound;
}

std::vector<std::string> missing_images(const LabelSet& set, const std::filesystem::path& root) {
  std::vector<std::string> missing;
  if (set.kind != LabelKind::image) return missing;
  for (const auto& [leaf, entry] : set.entries) {
    if (!std::filesystem::is_regular_file(root / entry.value)) missing.push_back(entry.value);
  }
  return missing;
}

}  // namespace prototree
