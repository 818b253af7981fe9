#include <gtest/gtest.h>

#include <random>

#include "prototree/agglomerate.hpp"
#include "prototree/error.hpp"
#include "prototree/tree_model.hpp"
#include "test_support.hpp"

namespace prototree {
namespace {

using reference::line_matrix;

TEST(Agglomerate, ThreePointsMinimax) {
  const Dendrogram dend = agglomerate(line_matrix({0, 1, 3}), Linkage::minimax);
  ASSERT_EQ(dend.merges().size(), 2u);
  EXPECT_EQ(dend.merges()[0], (Merge{0, 1, 1.0}));
  EXPECT_EQ(dend.merges()[1], (Merge{2, 3, 2.0}));
  EXPECT_EQ(dend.prototypes(), (std::vector<LeafId>{0, 1}));
  EXPECT_EQ(dend, reference::agglomerate_naive(line_matrix({0, 1, 3}), Linkage::minimax));
}

TEST(Agglomerate, FourPointsMinimax) {
  const Dendrogram dend = testing::four_point_tree();
  ASSERT_EQ(dend.merges().size(), 3u);
  EXPECT_EQ(dend.merges()[0], (Merge{0, 1, 1.0}));
  EXPECT_EQ(dend.merges()[1], (Merge{2, 3, 1.0}));
  EXPECT_EQ(dend.merges()[2], (Merge{4, 5, 10.0}));
  EXPECT_EQ(dend.prototypes(), (std::vector<LeafId>{0, 2, 1}));
  EXPECT_EQ(dend.order(), (std::vector<LeafId>{0, 1, 2, 3}));
}

TEST(Agglomerate, TwoPointsAnyLinkage) {
  for (Linkage linkage : {Linkage::minimax, Linkage::complete}) {
    const Dendrogram dend = agglomerate(line_matrix({2, 4.5}), linkage);
    ASSERT_EQ(dend.merges().size(), 1u);
    EXPECT_EQ(dend.merges()[0], (Merge{0, 1, 2.5}));
    EXPECT_EQ(dend.linkage(), linkage);
  }
}

TEST(Agglomerate, CompleteLinkageFourPoints) {
  const Dendrogram dend = agglomerate(line_matrix({0, 1, 10, 11}), Linkage::complete);
  EXPECT_EQ(dend.merges()[2].height, 11.0);
  // Prototypes are still the minimax ones.
  EXPECT_EQ(dend.prototypes(), (std::vector<LeafId>{0, 2, 1}));
}

TEST(Agglomerate, DuplicatePointsAreAllowed) {
  const Dendrogram dend = agglomerate(line_matrix({3, 3, 3, 7}), Linkage::minimax);
  EXPECT_EQ(dend.merges()[0].height, 0.0);
  EXPECT_EQ(dend.merges()[1].height, 0.0);
  EXPECT_EQ(dend.merges()[2].height, 4.0);
}

TEST(Agglomerate, MatchesNaiveRecomputation) {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 2 + rng() % 60;
    // Every third instance uses a handful of integer levels to force ties.
    const auto d = reference::random_matrix(n, rng, trial % 3 == 0 ? 3 : 0);
    for (Linkage linkage : {Linkage::minimax, Linkage::complete}) {
      EXPECT_EQ(agglomerate(d, linkage), reference::agglomerate_naive(d, linkage))
          << "n=" << n << " trial=" << trial << " linkage=" << to_string(linkage);
    }
  }
}

TEST(Agglomerate, MinimaxHeightIsRadiusAndPrototypeIsMinimaxCentre) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const auto d = reference::random_matrix(5 + rng() % 40, rng, trial % 2 ? 4 : 0);
    const Dendrogram dend = agglomerate(d, Linkage::minimax);
    for (NodeId id = static_cast<NodeId>(dend.leaf_count()); id < dend.node_count(); ++id) {
      const auto [radius, proto] = reference::radius_and_prototype(subtree_leaves(dend, id), d);
      EXPECT_EQ(dend.height(id), radius);
      EXPECT_EQ(dend.prototype(id), proto);
    }
  }
}

TEST(Agglomerate, IsDeterministic) {
  std::mt19937_64 rng(99);
  const auto d = reference::random_matrix(120, rng, 6);
  EXPECT_EQ(agglomerate(d, Linkage::minimax), agglomerate(d, Linkage::minimax));
}

TEST(Agglomerate, CompleteHeightsNonDecreasingTowardsRoot) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const Dendrogram dend = reference::random_dendrogram(5 + rng() % 80, rng, Linkage::complete);
    for (NodeId id = 0; id + 1 < dend.node_count(); ++id) {
      EXPECT_LE(dend.height(id), dend.height(dend.parent(id)));
    }
  }
}

TEST(Agglomerate, CutGuaranteeOnSmallInstances) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 20; ++trial) {
    const auto d = reference::random_matrix(5 + rng() % 50, rng, trial % 2 ? 5 : 0);
    const Dendrogram dend = agglomerate(d, Linkage::minimax);
    for (const Merge& m : dend.merges()) {
      for (double h : {m.height, m.height + 1e-9, std::max(0.0, m.height - 1e-9)}) {
        const Clustering c = cut_at_height(dend, h);
        for (LeafId x = 0; x < dend.leaf_count(); ++x) {
          EXPECT_LE(d(x, c.cluster_prototypes[c.assignment[x]]), h + 1e-12);
        }
      }
    }
  }
}

TEST(AttachPrototypes, IdentityLeavesTreeUnchanged) {
  const Dendrogram dend = testing::four_point_tree();
  EXPECT_EQ(attach_prototypes(dend, dend.prototypes()), dend);
}

TEST(AttachPrototypes, AcceptsMembersOfSubtree) {
  const Dendrogram dend = testing::three_point_tree();
  const std::vector<LeafId> protos{1, 2};
  const Dendrogram attached = attach_prototypes(dend, protos);
  EXPECT_EQ(attached.prototypes(), protos);
  EXPECT_EQ(attached.merges(), dend.merges());
}

TEST(AttachPrototypes, RejectsLeafOutsideSubtree) {
  const Dendrogram dend = testing::three_point_tree();
  try {
    attach_prototypes(dend, std::vector<LeafId>{2, 2});
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("node 3"), std::string::npos) << e.what();
    EXPECT_NE(std::string(e.what()).find("leaf 2"), std::string::npos) << e.what();
  }
  EXPECT_THROW(attach_prototypes(dend, std::vector<LeafId>{0}), ValidationError);
}

TEST(Dendrogram, RejectsBrokenStructure) {
  const std::vector<std::string> labels{"a", "b", "c"};
  // forward reference
  EXPECT_THROW(Dendrogram(labels, {{0, 4, 1.0}, {2, 3, 2.0}}, {0, 0}, Linkage::minimax), ValidationError);
  // node reused
  EXPECT_THROW(Dendrogram(labels, {{0, 1, 1.0}, {0, 3, 2.0}}, {0, 0}, Linkage::minimax), ValidationError);
  // negative height
  EXPECT_THROW(Dendrogram(labels, {{0, 1, -1.0}, {2, 3, 2.0}}, {0, 0}, Linkage::minimax), ValidationError);
}

TEST(Dendrogram, StructureQueries) {
  const Dendrogram dend = testing::four_point_tree();
  EXPECT_EQ(dend.root(), 6u);
  EXPECT_EQ(dend.parent(0), 4u);
  EXPECT_EQ(dend.parent(5), 6u);
  EXPECT_EQ(dend.size(6), 4u);
  EXPECT_EQ(dend.depth(3), 2u);
  EXPECT_EQ(dend.ancestors(3), (std::vector<NodeId>{6, 5}));
  EXPECT_TRUE(dend.contains(5, 2));
  EXPECT_FALSE(dend.contains(4, 2));
  EXPECT_EQ(subtree_leaves(dend, 5), (std::vector<LeafId>{2, 3}));
}

}  // namespace
}  // namespace prototree
