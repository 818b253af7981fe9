#include <algorithm>
#include <set>
#include <tuple>

#include "prototree/error.hpp"
#include "prototree/matrix_io.hpp"
#include "prototree/tree_model.hpp"

namespace prototree {

void validate_view(const Dendrogram& dend, const ViewState& view) {
  for (NodeId id : view.expanded) {
    if (id >= dend.node_count() || dend.is_leaf(id)) {
      throw ValidationError("expanded node " + std::to_string(id) + " is not an interior node");
    }
    if (id != dend.root() && !view.expanded.contains(dend.parent(id))) {
      throw ValidationError("expanded node " + std::to_string(id) + ": ancestors not expanded");
    }
  }
}

bool is_visible(const Dendrogram& dend, const ViewState& view, NodeId id) {
  return id == dend.root() || view.expanded.contains(dend.parent(id));
}

ViewState expand(const Dendrogram& dend, ViewState view, NodeId id) {
  if (id >= dend.node_count()) throw NotFoundError("unknown node " + std::to_string(id));
  if (dend.is_leaf(id)) throw ValidationError("cannot expand leaf " + std::to_string(id));
  if (!is_visible(dend, view, id)) throw ValidationError("ancestors not expanded");
  view.expanded.insert(id);
  return view;
}

ViewState collapse(const Dendrogram& dend, ViewState view, NodeId id) {
  if (id >= dend.node_count()) throw NotFoundError("unknown node " + std::to_string(id));
  if (dend.is_leaf(id)) throw ValidationError("cannot collapse leaf " + std::to_string(id));
  std::erase_if(view.expanded, [&](NodeId v) { return dend.contains(id, v); });
  return view;
}

ViewState reveal(const Dendrogram& dend, ViewState view, NodeId id) {
  if (id >= dend.node_count()) throw NotFoundError("unknown node " + std::to_string(id));
  while (id != dend.root()) {
    id = dend.parent(id);
    if (!view.expanded.insert(id).second) break;
  }
  return view;
}

ViewState view_for_clustering(const Dendrogram& dend, const Clustering& clustering,
                              std::string active_label_set) {
  ViewState view{{}, std::move(active_label_set)};
  for (NodeId node : clustering.cluster_nodes) view = reveal(dend, std::move(view), node);
  return view;
}

bool shows_label(const Dendrogram& dend, NodeId id) {
  return id == dend.root() || dend.prototype(id) != dend.prototype(dend.parent(id));
}

RenderTree visible_tree(const Dendrogram& dend, const ViewState& view,
                        const std::vector<std::string>& display) {
  validate_view(dend, view);
  if (display.size() != dend.leaf_count()) throw ValidationError("display labels do not match leaves");
  RenderTree tree;
  std::vector<NodeId> stack{dend.root()};
  while (!stack.empty()) {
    const NodeId id = stack.back();
    stack.pop_back();
    const bool interior = !dend.is_leaf(id);
    const bool open = interior && view.expanded.contains(id);
    RenderNode node{id,
                    id == dend.root() ? std::nullopt : std::optional<NodeId>(dend.parent(id)),
                    dend.height(id),
                    dend.size(id),
                    dend.prototype(id),
                    display[dend.prototype(id)],
                    shows_label(dend, id),
                    interior && !open,
                    interior,
                    {}};
    if (open) {
      const Merge& m = dend.merge_of(id);
      node.children = {m.left, m.right};
      stack.push_back(m.right);
      stack.push_back(m.left);
    }
    tree.nodes.push_back(std::move(node));
  }
  return tree;
}

std::vector<NodeId> frontier(const Dendrogram& dend, const ViewState& view) {
  std::vector<NodeId> out;
  std::vector<NodeId> stack{dend.root()};
  while (!stack.empty()) {
    const NodeId id = stack.back();
    stack.pop_back();
    if (dend.is_leaf(id) || !view.expanded.contains(id)) {
      out.push_back(id);
    } else {
      const Merge& m = dend.merge_of(id);
      stack.push_back(m.right);
      stack.push_back(m.left);
    }
  }
  return out;
}

std::optional<SearchHit> search_highest(const Dendrogram& dend, std::string_view query,
                                        const std::vector<std::string>& display) {
  if (display.size() != dend.leaf_count()) throw ValidationError("display labels do not match leaves");
  std::optional<NodeId> best;
  for (NodeId id = 0; id < dend.node_count(); ++id) {
    if (display[dend.prototype(id)] != query) continue;
    if (!best || std::make_tuple(dend.depth(id), id) < std::make_tuple(dend.depth(*best), *best)) {
      best = id;
    }
  }
  if (!best) return std::nullopt;
  return SearchHit{*best, dend.ancestors(*best)};
}

std::vector<std::string> prefix_matches(const std::vector<std::string>& display,
                                        std::string_view prefix, std::size_t limit) {
  std::set<std::string_view> found;
  for (const auto& label : display) {
    if (label.starts_with(prefix)) found.insert(label);
  }
  std::vector<std::string> out;
  for (auto it = found.begin(); it != found.end() && out.size() < limit; ++it) out.emplace_back(*it);
  return out;
}

Clustering export_clusters(const Dendrogram& dend, const ViewState& view) {
  validate_view(dend, view);
  return clustering_from_nodes(dend, frontier(dend, view), "view");
}

std::string cluster_table_csv(const Dendrogram& dend, const Clustering& clustering) {
  std::string out = "leaf_label,cluster,prototype\n";
  for (LeafId leaf : dend.order()) {
    const std::size_t c = clustering.assignment.at(leaf);
    out += csv_escape(dend.labels()[leaf]) + "," + std::to_string(c) + "," +
           csv_escape(dend.labels()[clustering.cluster_prototypes.at(c)]) + "\n";
  }
  return out;
}

}  // namespace prototree
