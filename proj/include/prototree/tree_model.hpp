#pragma once

#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "prototree/dendrogram.hpp"

namespace prototree {

/// A partition of the leaves into dendrogram nodes.
struct Clustering {
  /// Cluster index per leaf id.
  std::vector<std::size_t> assignment;
  /// Node whose leaf set forms each cluster. Clusters are numbered by first
  /// appearance in the dendrogram's leaf order.
  std::vector<NodeId> cluster_nodes;
  std::vector<LeafId> cluster_prototypes;
  /// "height=<h>", "top-k=<k>", "dynamic(min_size=<m>)" or "view".
  std::string method;

  std::size_t cluster_count() const noexcept { return cluster_nodes.size(); }
};

/// Builds a Clustering from nodes whose leaf sets partition the leaves.
Clustering clustering_from_nodes(const Dendrogram& dend, std::vector<NodeId> nodes,
                                 std::string method);

/// Maximal nodes with height <= h. A merge at exactly h is kept.
Clustering cut_at_height(const Dendrogram& dend, double h);

/// Splits from the root, always opening the highest remaining node (later
/// merge first on equal heights), until k clusters exist. For monotone trees
/// this undoes the k-1 highest merges.
Clustering cut_top_k(const Dendrogram& dend, std::size_t k);

inline constexpr double kDynamicSplitRatio = 0.9;
inline constexpr int kDynamicMaxRounds = 100;

/// Simplified dynamic cut: start from cut_at_height(h0) (default: mean merge
/// height), then alternate split and merge passes until nothing changes.
///
///  split: a cluster whose two children are both interior nodes with at least
///         min_size leaves, and both sit at or below 0.9 x its height, is
///         replaced by its children.
///  merge: a cluster smaller than min_size is replaced by its parent node,
///         absorbing every cluster under that parent.
///
/// Clusters are visited in increasing node id; at most 100 rounds.
Clustering dynamic_cut(const Dendrogram& dend, std::size_t min_size,
                       std::optional<double> h0 = std::nullopt);

/// Interior nodes currently drawn expanded, plus the active label set.
struct ViewState {
  std::set<NodeId> expanded;
  std::string active_label_set;

  friend bool operator==(const ViewState&, const ViewState&) = default;
};

/// Throws ValidationError if an id is not interior or an expanded node has a
/// collapsed ancestor.
void validate_view(const Dendrogram& dend, const ViewState& view);

/// All strict ancestors of the node are expanded.
bool is_visible(const Dendrogram& dend, const ViewState& view, NodeId id);

/// Throws ValidationError("ancestors not expanded") for hidden nodes and for
/// leaves.
ViewState expand(const Dendrogram& dend, ViewState view, NodeId id);
/// Removes `id` and every expanded node under it.
ViewState collapse(const Dendrogram& dend, ViewState view, NodeId id);
/// Expands every strict ancestor of `id`.
ViewState reveal(const Dendrogram& dend, ViewState view, NodeId id);

/// View whose frontier is exactly the clusters of `clustering`.
ViewState view_for_clustering(const Dendrogram& dend, const Clustering& clustering,
                              std::string active_label_set = {});

struct RenderNode {
  NodeId id;
  std::optional<NodeId> parent;
  double height;
  std::size_t size;
  LeafId prototype;
  std::string label;
  bool show_label;
  bool collapsed;
  bool has_children;
  /// Visible children; empty for leaves and collapsed nodes.
  std::vector<NodeId> children;
};

/// Visible nodes in pre-order (root first, left before right).
struct RenderTree {
  std::vector<RenderNode> nodes;
};

/// Label shown next to a node: differs from the parent's prototype, or root.
bool shows_label(const Dendrogram& dend, NodeId id);

/// The induced tree of visible nodes. `display` holds one label per leaf id.
RenderTree visible_tree(const Dendrogram& dend, const ViewState& view,
                        const std::vector<std::string>& display);

/// Collapsed visible nodes and visible leaves, left to right.
std::vector<NodeId> frontier(const Dendrogram& dend, const ViewState& view);

struct SearchHit {
  NodeId node;
  /// Strict ancestors, root first.
  std::vector<NodeId> path;

  friend bool operator==(const SearchHit&, const SearchHit&) = default;
};

/// Shallowest node whose display label equals `query` (interior nodes show
/// their prototype's label). Equal depths go to the smaller id.
std::optional<SearchHit> search_highest(const Dendrogram& dend, std::string_view query,
                                        const std::vector<std::string>& display);

/// Up to `limit` distinct labels starting with `prefix`, sorted.
std::vector<std::string> prefix_matches(const std::vector<std::string>& display,
                                        std::string_view prefix, std::size_t limit = 20);

/// The clustering formed by the view's frontier.
Clustering export_clusters(const Dendrogram& dend, const ViewState& view);

/// CSV `leaf_label,cluster,prototype`, rows in leaf order.
std::string cluster_table_csv(const Dendrogram& dend, const Clustering& clustering);

}  // namespace prototree
