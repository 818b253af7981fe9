#pragma once

#include <span>

#include "prototree/dissimilarity.hpp"

namespace prototree {

enum class Linkage { minimax, complete };

const char* to_string(Linkage linkage) noexcept;
/// Accepts "minimax" or "complete"; throws ValidationError otherwise.
Linkage parse_linkage(std::string_view name);

struct RadiusAndPrototype {
  double radius;
  LeafId prototype;

  friend bool operator==(const RadiusAndPrototype&, const RadiusAndPrototype&) = default;
};

/// Largest dissimilarity between `x` and any member of `cluster`. `x` need
/// not belong to the cluster.
double d_max(LeafId x, std::span<const LeafId> cluster, const DissimilarityMatrix& d);

/// Radius of the smallest member-centred ball covering `cluster`, and the
/// member at its centre. Ties go to the smallest leaf id.
RadiusAndPrototype minimax_radius_and_prototype(std::span<const LeafId> cluster,
                                                const DissimilarityMatrix& d);

/// Minimax linkage of two disjoint clusters: the radius and prototype of their
/// union.
RadiusAndPrototype minimax_linkage(std::span<const LeafId> g, std::span<const LeafId> h,
                                   const DissimilarityMatrix& d);

/// Farthest cross pair between two disjoint clusters.
double complete_linkage(std::span<const LeafId> g, std::span<const LeafId> h,
                        const DissimilarityMatrix& d);

}  // namespace prototree
