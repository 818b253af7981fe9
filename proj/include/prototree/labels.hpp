#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace prototree {

class Dendrogram;

enum class LabelKind { text, image };

struct LabelEntry {
  /// Display text, or an image path relative to the asset root.
  std::string value;
  std::optional<std::string> tooltip;

  friend bool operator==(const LabelEntry&, const LabelEntry&) = default;
};

/// A swappable mapping from observation labels to display labels, independent
/// of the clustering.
struct LabelSet {
  std::string id;
  LabelKind kind = LabelKind::text;
  std::optional<std::string> assets_root;
  std::map<std::string, LabelEntry> entries;

  friend bool operator==(const LabelSet&, const LabelSet&) = default;
};

const char* to_string(LabelKind kind) noexcept;

/// Manifest JSON: {id, kind, assets_root?, entries: {leaf: {label|image, tooltip?}}}.
LabelSet parse_label_manifest(std::string_view json_text);
LabelSet load_label_manifest(const std::filesystem::path& path);

/// Text label set mapping every leaf to its own label.
LabelSet identity_label_set(const Dendrogram& dend, std::string id = "default");

/// Observation labels of `dend` with no entry in `set`, in leaf order.
std::vector<std::string> missing_leaves(const LabelSet& set, const Dendrogram& dend);

/// A label set resolved against one dendrogram: display strings by leaf id.
struct BoundLabels {
  std::string id;
  LabelKind kind;
  std::vector<std::string> display;
  std::vector<std::optional<std::string>> tooltips;
};

/// Throws ValidationError listing every missing leaf.
BoundLabels bind_labels(const LabelSet& set, const Dendrogram& dend);

/// Image entries whose file does not exist under `root`.
std::vector<std::string> missing_images(const LabelSet& set, const std::filesystem::path& root);

}  // namespace prototree
