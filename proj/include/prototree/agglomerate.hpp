#pragma once

#include "prototree/dendrogram.hpp"
#include "prototree/dissimilarity.hpp"
#include "prototree/linkage.hpp"

namespace prototree {

/// Greedy agglomerative clustering.
///
/// Keeps, for every leaf x and active cluster C, the value d_max(x, C). On a
/// merge G+H the new column is max(d_max(x,G), d_max(x,H)), and the linkage of
/// the merged cluster K against any other cluster L is
///
///   minimax:  min over x in K u L of max(d_max(x,K), d_max(x,L))
///   complete: max(link(G,L), link(H,L))
///
/// Both updates use only max/min, so values are bit-identical to recomputing
/// from the raw dissimilarities. The cheapest pair is found through a
/// per-cluster nearest-partner array keyed on (value, smaller id, larger id).
/// Updates over active clusters run under OpenMP; results do not depend on the
/// thread count.
///
/// Every merged node gets the minimax prototype of its leaf set, whatever the
/// linkage.
Dendrogram agglomerate(const DissimilarityMatrix& d, Linkage linkage);

}  // namespace prototree
