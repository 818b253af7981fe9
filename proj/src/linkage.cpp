#include "prototree/linkage.hpp"

#include <algorithm>
#include <limits>
#include <string>
#include <unordered_set>

#include "prototree/error.hpp"

namespace prototree {

const char* to_string(Linkage linkage) noexcept {
  switch (linkage) {
    case Linkage::minimax: return "minimax";
    case Linkage::complete: return "complete";
  }
  return "unknown";
}

Linkage parse_linkage(std::string_view name) {
  if (name == "minimax") return Linkage::minimax;
  if (name == "complete") return Linkage::complete;
  throw ValidationError("unknown linkage '" + std::string(name) + "'");
}

namespace {

void check_cluster(std::span<const LeafId> cluster, const DissimilarityMatrix& d) {
  if (cluster.empty()) throw ValidationError("empty cluster");
  for (LeafId x : cluster) {
    if (x >= d.size()) throw ValidationError("leaf id " + std::to_string(x) + " out of range");
  }
}

void check_disjoint(std::span<const LeafId> g, std::span<const LeafId> h) {
  const std::unordered_set<LeafId> in_g(g.begin(), g.end());
  for (LeafId x : h) {
    if (in_g.contains(x)) throw ValidationError("clusters not disjoint");
  }
}

}  // namespace

double d_max(LeafId x, std::span<const LeafId> cluster, const DissimilarityMatrix& d) {
  check_cluster(cluster, d);
  if (x >= d.size()) throw ValidationError("leaf id " + std::to_string(x) + " out of range");
  double best = 0.0;
  for (LeafId y : cluster) best = std::max(best, d(x, y));
  return best;
}

RadiusAndPrototype minimax_radius_and_prototype(std::span<const LeafId> cluster,
                                                const DissimilarityMatrix& d) {
  check_cluster(cluster, d);
  RadiusAndPrototype best{std::numeric_limits<double>::infinity(),
                          std::numeric_limits<LeafId>::max()};
  for (LeafId x : cluster) {
    const double r = d_max(x, cluster, d);
    if (r < best.radius || (r == best.radius && x < best.prototype)) best = {r, x};
  }
  return best;
}

RadiusAndPrototype minimax_linkage(std::span<const LeafId> g, std::span<const LeafId> h,
                                   const DissimilarityMatrix& d) {
  check_cluster(g, d);
  check_cluster(h, d);
  check_disjoint(g, h);
  std::vector<LeafId> merged(g.begin(), g.end());
  merged.insert(merged.end(), h.begin(), h.end());
  return minimax_radius_and_prototype(merged, d);
}

double complete_linkage(std::span<const LeafId> g, std::span<const LeafId> h,
                        const DissimilarityMatrix& d) {
  check_cluster(g, d);
  check_cluster(h, d);
  check_disjoint(g, h);
  double best = 0.0;
  for (LeafId x : g) {
    for (LeafId y : h) best = std::max(best, d(x, y));
  }
  return best;
}

}  // namespace prototree
