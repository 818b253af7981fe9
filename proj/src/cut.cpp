#include <algorithm>
#include <numeric>
#include <queue>
#include <set>
#include <tuple>

#include "prototree/error.hpp"
#include "prototree/matrix_io.hpp"
#include "prototree/tree_model.hpp"

namespace prototree {

namespace {

std::pair<NodeId, NodeId> children(const Dendrogram& dend, NodeId id) {
  const Merge& m = dend.merge_of(id);
  return {m.left, m.right};
}

}  // namespace

Clustering clustering_from_nodes(const Dendrogram& dend, std::vector<NodeId> nodes,
                                 std::string method) {
  const std::size_t n = dend.leaf_count();
  const LeafId* base = dend.order().data();
  std::sort(nodes.begin(), nodes.end(), [&](NodeId a, NodeId b) {
    return dend.leaves(a).data() < dend.leaves(b).data();
  });
  Clustering c;
  c.method = std::move(method);
  c.assignment.assign(n, n);
  std::size_t covered = 0;
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    const NodeId node = nodes[k];
    if (node >= dend.node_count()) throw ValidationError("unknown node " + std::to_string(node));
    if (static_cast<std::size_t>(dend.leaves(node).data() - base) != covered) {
      throw ValidationError("cluster nodes do not partition the leaves");
    }
    covered += dend.size(node);
    for (LeafId leaf : dend.leaves(node)) c.assignment[leaf] = k;
    c.cluster_nodes.push_back(node);
    c.cluster_prototypes.push_back(dend.prototype(node));
  }
  if (covered != n) throw ValidationError("cluster nodes do not cover every leaf");
  return c;
}

Clustering cut_at_height(const Dendrogram& dend, double h) {
  if (!(h >= 0.0)) throw ValidationError("cut height must be >= 0");
  std::vector<NodeId> clusters;
  std::vector<NodeId> stack{dend.root()};
  while (!stack.empty()) {
    const NodeId id = stack.back();
    stack.pop_back();
    if (dend.is_leaf(id) || dend.height(id) <= h) {
      clusters.push_back(id);
    } else {
      const auto [l, r] = children(dend, id);
      stack.push_back(r);
      stack.push_back(l);
    }
  }
  return clustering_from_nodes(dend, std::move(clusters), "height=" + format_double(h));
}

Clustering cut_top_k(const Dendrogram& dend, std::size_t k) {
  if (k < 1 || k > dend.leaf_count()) {
    throw ValidationError("k must be in [1, " + std::to_string(dend.leaf_count()) + "], got " +
                          std::to_string(k));
  }
  // Highest node first; on equal heights the later merge (larger id) first.
  const auto lower = [&](NodeId a, NodeId b) {
    return std::make_tuple(dend.height(a), a) < std::make_tuple(dend.height(b), b);
  };
  std::priority_queue<NodeId, std::vector<NodeId>, decltype(lower)> open(lower);
  std::vector<NodeId> leaves;
  open.push(dend.root());
  if (dend.is_leaf(dend.root())) leaves.push_back(dend.root());
  while (open.size() + leaves.size() < k) {
    const NodeId id = open.top();
    open.pop();
    const auto [l, r] = children(dend, id);
    for (NodeId child : {l, r}) {
      if (dend.is_leaf(child)) {
        leaves.push_back(child);
      } else {
        open.push(child);
      }
    }
  }
  std::vector<NodeId> clusters = std::move(leaves);
  for (; !open.empty(); open.pop()) clusters.push_back(open.top());
  return clustering_from_nodes(dend, std::move(clusters), "top-k=" + std::to_string(k));
}

Clustering dynamic_cut(const Dendrogram& dend, std::size_t min_size, std::optional<double> h0) {
  if (min_size < 1) throw ValidationError("min_size must be >= 1");
  double start = 0.0;
  if (h0) {
    start = *h0;
  } else {
    for (const Merge& m : dend.merges()) start += m.height;
    start /= static_cast<double>(dend.merges().size());
  }
  const Clustering initial = cut_at_height(dend, std::max(start, 0.0));
  std::set<NodeId> clusters(initial.cluster_nodes.begin(), initial.cluster_nodes.end());

  const auto splittable = [&](NodeId id) {
    if (dend.is_leaf(id)) return false;
    const auto [l, r] = children(dend, id);
    const double limit = kDynamicSplitRatio * dend.height(id);
    for (NodeId child : {l, r}) {
      if (dend.is_leaf(child) || dend.size(child) < min_size || dend.height(child) > limit) {
        return false;
      }
    }
    return true;
  };

  for (int round = 0; round < kDynamicMaxRounds; ++round) {
    bool changed = false;
    for (NodeId id : std::vector<NodeId>(clusters.begin(), clusters.end())) {
      if (!splittable(id)) continue;
      const auto [l, r] = children(dend, id);
      clusters.erase(id);
      clusters.insert({l, r});
      changed = true;
    }
    for (NodeId id : std::vector<NodeId>(clusters.begin(), clusters.end())) {
      if (!clusters.contains(id) || dend.size(id) >= min_size || id == dend.root()) continue;
      const NodeId parent = dend.parent(id);
      std::erase_if(clusters, [&](NodeId c) { return dend.contains(parent, c); });
      clusters.insert(parent);
      changed = true;
    }
    if (!changed) break;
  }
  return clustering_from_nodes(dend, {clusters.begin(), clusters.end()},
                               "dynamic(min_size=" + std::to_string(min_size) + ")");
}

}  // namespace prototree
