#include "prototree/agglomerate.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <tuple>

namespace prototree {

namespace {

constexpr std::size_t kNoSlot = std::numeric_limits<std::size_t>::max();

// Candidate merge as seen from one cluster's slot. Ordered by value, then by
// the creation ids of the pair (smaller first).
struct Candidate {
  double value = std::numeric_limits<double>::infinity();
  NodeId lo = std::numeric_limits<NodeId>::max();
  NodeId hi = std::numeric_limits<NodeId>::max();
  std::size_t partner = kNoSlot;

  bool better_than(const Candidate& o) const noexcept {
    return std::tie(value, lo, hi) < std::tie(o.value, o.lo, o.hi);
  }
};

class Agglomerator {
 public:
  Agglomerator(const DissimilarityMatrix& d, Linkage linkage)
      : n_(d.size()),
        linkage_(linkage),
        link_(n_ * n_),
        dmax_(n_ * n_),
        node_(n_),
        members_(n_),
        nearest_(n_) {
    const auto stride = static_cast<std::ptrdiff_t>(n_);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < stride; ++i) {
      for (std::size_t j = 0; j < n_; ++j) {
        const double v = d(static_cast<std::size_t>(i), j);
        link_[i * n_ + j] = v;
        dmax_[i * n_ + j] = v;
      }
    }
    std::iota(node_.begin(), node_.end(), NodeId{0});
    active_.resize(n_);
    std::iota(active_.begin(), active_.end(), std::size_t{0});
    for (std::size_t s = 0; s < n_; ++s) members_[s] = {static_cast<LeafId>(s)};
    rescan(active_);
  }

  Dendrogram run(std::vector<std::string> labels) {
    std::vector<Merge> merges;
    std::vector<LeafId> prototypes;
    merges.reserve(n_ - 1);
    prototypes.reserve(n_ - 1);
    for (std::size_t step = 0; step + 1 < n_; ++step) {
      std::size_t best = active_.front();
      for (std::size_t s : active_) {
        if (nearest_[s].better_than(nearest_[best])) best = s;
      }
      const Candidate pick = nearest_[best];
      const std::size_t g = std::min(best, pick.partner);
      const std::size_t h = std::max(best, pick.partner);
      merges.push_back({pick.lo, pick.hi, pick.value});
      prototypes.push_back(merge(g, h, static_cast<NodeId>(n_ + step)));
    }
    return Dendrogram(std::move(labels), std::move(merges), std::move(prototypes), linkage_);
  }

 private:
  double& link(std::size_t a, std::size_t b) noexcept { return link_[a * n_ + b]; }
  const double* dmax_row(std::size_t s) const noexcept { return dmax_.data() + s * n_; }

  Candidate candidate(std::size_t from, std::size_t to) const noexcept {
    const NodeId a = node_[from];
    const NodeId b = node_[to];
    return {link_[from * n_ + to], std::min(a, b), std::max(a, b), to};
  }

  void rescan(const std::vector<std::size_t>& rows) {
    const auto count = static_cast<std::ptrdiff_t>(rows.size());
#pragma omp parallel for schedule(dynamic, 16)
    for (std::ptrdiff_t r = 0; r < count; ++r) {
      const std::size_t s = rows[r];
      Candidate best;
      for (std::size_t t : active_) {
        if (t == s) continue;
        const Candidate c = candidate(s, t);
        if (c.better_than(best)) best = c;
      }
      nearest_[s] = best;
    }
  }

  // Minimax linkage of the clusters in slots a and b from the cached columns.
  double minimax_from_cache(std::size_t a, std::size_t b) const noexcept {
    const double* ra = dmax_row(a);
    const double* rb = dmax_row(b);
    double best = std::numeric_limits<double>::infinity();
    for (LeafId x : members_[a]) best = std::min(best, std::max(ra[x], rb[x]));
    for (LeafId x : members_[b]) best = std::min(best, std::max(ra[x], rb[x]));
    return best;
  }

  // Merges slot h into slot g as node `id`; returns the new prototype.
  LeafId merge(std::size_t g, std::size_t h, NodeId id) {
    const auto nn = static_cast<std::ptrdiff_t>(n_);
    double* rg = dmax_.data() + g * n_;
    const double* rh = dmax_row(h);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t x = 0; x < nn; ++x) rg[x] = std::max(rg[x], rh[x]);

    members_[g].insert(members_[g].end(), members_[h].begin(), members_[h].end());
    members_[h].clear();
    members_[h].shrink_to_fit();
    node_[g] = id;
    active_.erase(std::find(active_.begin(), active_.end(), h));

    LeafId proto = std::numeric_limits<LeafId>::max();
    double radius = std::numeric_limits<double>::infinity();
    for (LeafId x : members_[g]) {
      if (rg[x] < radius || (rg[x] == radius && x < proto)) {
        radius = rg[x];
        proto = x;
      }
    }

    const auto m = static_cast<std::ptrdiff_t>(active_.size());
    std::vector<double> fresh(active_.size());
#pragma omp parallel for schedule(dynamic, 8)
    for (std::ptrdiff_t i = 0; i < m; ++i) {
      const std::size_t l = active_[i];
      if (l == g) continue;
      fresh[i] = linkage_ == Linkage::minimax ? minimax_from_cache(g, l)
                                              : std::max(link_[g * n_ + l], link_[h * n_ + l]);
    }
    for (std::ptrdiff_t i = 0; i < m; ++i) {
      const std::size_t l = active_[i];
      if (l == g) continue;
      link(g, l) = fresh[i];
      link(l, g) = fresh[i];
    }

    std::vector<std::size_t> stale{g};
    for (std::size_t l : active_) {
      if (l == g) continue;
      if (nearest_[l].partner == g || nearest_[l].partner == h) {
        stale.push_back(l);
      } else if (const Candidate c = candidate(l, g); c.better_than(nearest_[l])) {
        nearest_[l] = c;
      }
    }
    rescan(stale);
    return proto;
  }

  std::size_t n_;
  Linkage linkage_;
  std::vector<double> link_;  // slot x slot
  std::vector<double> dmax_;  // slot x leaf: d_max(leaf, cluster in slot)
  std::vector<NodeId> node_;  // node id currently held by each slot
  std::vector<std::vector<LeafId>> members_;
  std::vector<Candidate> nearest_;
  std::vector<std::size_t> active_;  // ascending
};

}  // namespace

Dendrogram agglomerate(const DissimilarityMatrix& d, Linkage linkage) {
  return Agglomerator(d, linkage).run(d.labels());
}

}  // namespace prototree
