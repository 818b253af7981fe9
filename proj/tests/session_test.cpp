#include <gtest/gtest.h>

#include <json.hpp>
#include <random>

#include "prototree/error.hpp"
#include "prototree/session.hpp"
#include "prototree/tree_io.hpp"
#include "test_support.hpp"

namespace prototree {
namespace {

TEST(Session, EmptyViewRoundTrip) {
  const Dendrogram dend = testing::four_point_tree();
  const Session s = make_session(dend, {});
  EXPECT_EQ(deserialize_session(serialize_session(s), dend), s);
}

TEST(Session, LargeExpandedViewRoundTrip) {
  std::mt19937_64 rng(71);
  const Dendrogram dend = reference::random_dendrogram(200, rng);
  ViewState view{{}, "thumbs"};
  for (NodeId id = dend.root(); view.expanded.size() < 50; --id) {
    if (is_visible(dend, view, id)) view = expand(dend, view, id);
  }
  const Session s = make_session(dend, view);
  const Session back = deserialize_session(serialize_session(s), dend);
  EXPECT_EQ(back.view.expanded, view.expanded);
  EXPECT_EQ(back, s);
}

TEST(Session, RandomViewsRoundTrip) {
  std::mt19937_64 rng(73);
  for (int trial = 0; trial < 20; ++trial) {
    const Dendrogram dend = reference::random_dendrogram(3 + rng() % 60, rng);
    ViewState view{{}, "set" + std::to_string(trial)};
    for (int step = 0; step < 30; ++step) {
      const auto id = static_cast<NodeId>(dend.leaf_count() + rng() % (dend.leaf_count() - 1));
      if (is_visible(dend, view, id)) view = expand(dend, view, id);
    }
    Session s = make_session(dend, view);
    s.created = "2021-01-15T00:00:00Z";
    EXPECT_EQ(deserialize_session(serialize_session(s), dend), s);
  }
}

TEST(Session, JsonLayout) {
  const Dendrogram dend = testing::four_point_tree();
  const auto doc = nlohmann::json::parse(serialize_session(make_session(dend, {{6, 5}, "names"})));
  EXPECT_EQ(doc["format_version"], 1);
  EXPECT_EQ(doc["dendrogram_digest"], tree_digest(dend));
  EXPECT_EQ(doc["expanded"], nlohmann::json({5, 6}));
  EXPECT_EQ(doc["active_label_set"], "names");
  EXPECT_TRUE(doc["created"].is_string());
  EXPECT_TRUE(doc["modified"].is_string());
}

TEST(Session, DifferentDendrogramRejected) {
  const Session s = make_session(testing::four_point_tree(), {{6}, ""});
  EXPECT_THROW(deserialize_session(serialize_session(s), testing::three_point_tree()), DigestMismatchError);
}

TEST(Session, MalformedPayloads) {
  const Dendrogram dend = testing::four_point_tree();
  EXPECT_THROW(deserialize_session("not json", dend), ValidationError);
  EXPECT_THROW(deserialize_session("[]", dend), ValidationError);
  auto doc = nlohmann::json::parse(serialize_session(make_session(dend, {})));
  doc["format_version"] = 2;
  EXPECT_THROW(deserialize_session(doc.dump(), dend), ValidationError);
  doc["format_version"] = 1;
  doc["expanded"] = {4};  // parent 6 not expanded
  EXPECT_THROW(deserialize_session(doc.dump(), dend), ValidationError);
  doc["expanded"] = {"x"};
  EXPECT_THROW(deserialize_session(doc.dump(), dend), ValidationError);
}

}  // namespace
}  // namespace prototree
