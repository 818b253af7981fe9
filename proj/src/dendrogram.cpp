#include "prototree/dendrogram.hpp"

#include <cmath>
#include <string>

#include "prototree/error.hpp"

namespace prototree {

namespace {

std::string node_str(NodeId id) { return std::to_string(id); }

}  // namespace

Dendrogram::Dendrogram(std::vector<std::string> labels, std::vector<Merge> merges,
                       std::vector<LeafId> prototypes, Linkage linkage)
    : labels_(std::move(labels)),
      merges_(std::move(merges)),
      prototypes_(std::move(prototypes)),
      linkage_(linkage) {
  validate_labels(labels_);
  const std::size_t n = labels_.size();
  const std::size_t nodes = 2 * n - 1;
  if (merges_.size() != n - 1) {
    throw ValidationError("expected " + std::to_string(n - 1) + " merges, got " +
                          std::to_string(merges_.size()));
  }
  if (prototypes_.size() != n - 1) {
    throw ValidationError("expected " + std::to_string(n - 1) + " prototypes, got " +
                          std::to_string(prototypes_.size()));
  }

  constexpr NodeId kNone = static_cast<NodeId>(-1);
  parent_.assign(nodes, kNone);
  size_.assign(nodes, 1);
  for (std::size_t k = 0; k < merges_.size(); ++k) {
    const Merge& m = merges_[k];
    const auto self = static_cast<NodeId>(n + k);
    if (!std::isfinite(m.height) || m.height < 0.0) {
      throw ValidationError("merge " + std::to_string(k) + " has invalid height");
    }
    for (NodeId child : {m.left, m.right}) {
      if (child >= self) {
        throw ValidationError("merge " + std::to_string(k) + " references node " +
                              node_str(child) + " not created before it");
      }
      if (parent_[child] != kNone) {
        throw ValidationError("node " + node_str(child) + " merged more than once");
      }
      parent_[child] = self;
    }
    size_[self] = size_[m.left] + size_[m.right];
  }
  parent_[nodes - 1] = static_cast<NodeId>(nodes - 1);

  depth_.assign(nodes, 0);
  for (std::size_t id = nodes - 1; id-- > 0;) depth_[id] = depth_[parent_[id]] + 1;

  // Pre-order walk, left child first; leaves of every subtree end up
  // contiguous in order_.
  first_.assign(nodes, 0);
  order_.reserve(n);
  std::vector<NodeId> stack{static_cast<NodeId>(nodes - 1)};
  while (!stack.empty()) {
    const NodeId id = stack.back();
    stack.pop_back();
    first_[id] = order_.size();
    if (id < n) {
      order_.push_back(id);
    } else {
      const Merge& m = merges_[id - n];
      stack.push_back(m.right);
      stack.push_back(m.left);
    }
  }

  for (std::size_t k = 0; k < prototypes_.size(); ++k) {
    const LeafId p = prototypes_[k];
    const auto node = static_cast<NodeId>(n + k);
    if (p >= n || !contains(node, p)) {
      throw ValidationError("prototype of node " + node_str(node) + " is leaf " +
                            std::to_string(p) + ", which is not in its subtree");
    }
  }
}

std::vector<NodeId> Dendrogram::ancestors(NodeId id) const {
  std::vector<NodeId> path(depth_[id]);
  for (std::size_t i = path.size(); i-- > 0;) {
    id = parent_[id];
    path[i] = id;
  }
  return path;
}

bool Dendrogram::contains(NodeId ancestor, NodeId id) const noexcept {
  return first_[ancestor] <= first_[id] &&
         first_[id] + size_[id] <= first_[ancestor] + size_[ancestor];
}

std::vector<LeafId> subtree_leaves(const Dendrogram& dend, NodeId id) {
  const auto leaves = dend.leaves(id);
  return {leaves.begin(), leaves.end()};
}

Dendrogram attach_prototypes(const Dendrogram& dend, std::span<const LeafId> protos) {
  return Dendrogram(dend.labels(), dend.merges(), {protos.begin(), protos.end()}, dend.linkage());
}

}  // namespace prototree
