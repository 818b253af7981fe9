#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "prototree/dissimilarity.hpp"
#include "prototree/linkage.hpp"

namespace prototree {

/// Leaves are 0..n-1; the interior node created by merge k is n+k.
using NodeId = std::uint32_t;

struct Merge {
  NodeId left;
  NodeId right;
  double height;

  friend bool operator==(const Merge&, const Merge&) = default;
};

/// An agglomerative clustering of n labelled observations with a prototype
/// leaf attached to every interior node. Immutable once constructed; the
/// constructor checks the structural invariants.
class Dendrogram {
 public:
  Dendrogram(std::vector<std::string> labels, std::vector<Merge> merges,
             std::vector<LeafId> prototypes, Linkage linkage);

  std::size_t leaf_count() const noexcept { return labels_.size(); }
  std::size_t node_count() const noexcept { return 2 * labels_.size() - 1; }
  NodeId root() const noexcept { return static_cast<NodeId>(node_count() - 1); }
  bool is_leaf(NodeId id) const noexcept { return id < labels_.size(); }

  const std::vector<std::string>& labels() const noexcept { return labels_; }
  const std::vector<Merge>& merges() const noexcept { return merges_; }
  const std::vector<LeafId>& prototypes() const noexcept { return prototypes_; }
  /// Leaf order for a crossing-free drawing (left-to-right traversal).
  const std::vector<LeafId>& order() const noexcept { return order_; }
  Linkage linkage() const noexcept { return linkage_; }

  /// Merge height for interior nodes, 0 for leaves.
  double height(NodeId id) const noexcept {
    return is_leaf(id) ? 0.0 : merges_[id - labels_.size()].height;
  }
  /// The prototype of an interior node; a leaf is its own prototype.
  LeafId prototype(NodeId id) const noexcept {
    return is_leaf(id) ? id : prototypes_[id - labels_.size()];
  }
  const Merge& merge_of(NodeId id) const { return merges_.at(id - labels_.size()); }

  /// Parent of `id`; the root is its own parent.
  NodeId parent(NodeId id) const noexcept { return parent_[id]; }
  /// Number of leaves below `id`.
  std::size_t size(NodeId id) const noexcept { return size_[id]; }
  /// Edges between `id` and the root.
  std::size_t depth(NodeId id) const noexcept { return depth_[id]; }
  /// Strict ancestors of `id`, root first.
  std::vector<NodeId> ancestors(NodeId id) const;
  /// True when `ancestor` is `id` or lies above it.
  bool contains(NodeId ancestor, NodeId id) const noexcept;

  friend bool operator==(const Dendrogram&, const Dendrogram&) = default;

 private:
  std::vector<std::string> labels_;
  std::vector<Merge> merges_;
  std::vector<LeafId> prototypes_;
  std::vector<LeafId> order_;
  Linkage linkage_;
  std::vector<NodeId> parent_;
  std::vector<std::size_t> size_;
  std::vector<std::size_t> depth_;
  /// Position of each node's first leaf in order_; with size_ this gives the
  /// node's contiguous leaf range.
  std::vector<std::size_t> first_;

 public:
  /// Leaves below `id` as a contiguous slice of order().
  std::span<const LeafId> leaves(NodeId id) const noexcept {
    return {order_.data() + first_[id], size_[id]};
  }
};

/// Leaves below `id`, in drawing order.
std::vector<LeafId> subtree_leaves(const Dendrogram& dend, NodeId id);

/// Replace the prototypes of `dend` with user-supplied ones. Each
/// protos[k] must be a leaf under node n+k.
Dendrogram attach_prototypes(const Dendrogram& dend, std::span<const LeafId> protos);

}  // namespace prototree
