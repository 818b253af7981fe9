#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "prototree/error.hpp"
#include "prototree/features.hpp"
#include "prototree/labels.hpp"
#include "prototree/matrix_io.hpp"
#include "test_support.hpp"

namespace prototree {
namespace {

using Kind = MatrixError::Kind;

Kind error_kind(std::string_view csv) {
  try {
    parse_dissimilarity_csv(csv);
  } catch (const MatrixError& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error for:\n" << csv;
  return Kind::malformed;
}

TEST(CondensedIndex, BijectionUpTo50) {
  for (std::size_t n = 2; n <= 50; ++n) {
    std::size_t expected = 0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j, ++expected) {
        ASSERT_EQ(condensed_index(n, i, j), expected);
        ASSERT_EQ(condensed_pair(n, expected), std::make_pair(i, j));
      }
    }
  }
}

TEST(LoadDissimilarityCsv, TwoByTwo) {
  const auto d = parse_dissimilarity_csv(",A,B\nA,0,1\nB,1,0\n");
  EXPECT_EQ(d.size(), 2u);
  EXPECT_EQ(d.labels(), (std::vector<std::string>{"A", "B"}));
  ASSERT_EQ(d.condensed().size(), 1u);
  EXPECT_EQ(d.condensed()[0], 1.0);
}

TEST(LoadDissimilarityCsv, CondensedOrderFromLinePoints) {
  const auto d = parse_dissimilarity_csv(",x,y,z\r\nx,0,1,3\r\ny,1,0,2\r\nz,3,2,0\r\n");
  EXPECT_EQ(std::vector<double>(d.condensed().begin(), d.condensed().end()),
            (std::vector<double>{1, 3, 2}));
}

TEST(LoadDissimilarityCsv, AsymmetryNamesFirstCell) {
  try {
    parse_dissimilarity_csv(",a,b,c\na,0,1,3\nb,1,0,2\nc,3,2.5,0\n");
    FAIL();
  } catch (const MatrixError& e) {
    EXPECT_EQ(e.kind(), Kind::asymmetric);
    EXPECT_EQ(e.row(), 1);
    EXPECT_EQ(e.col(), 2);
    EXPECT_NE(std::string(e.what()).find("(1,2)"), std::string::npos);
  }
  // Within 1e-12 relative tolerance is accepted.
  EXPECT_NO_THROW(parse_dissimilarity_csv(",a,b\na,0,1\nb,1.0000000000001,0\n"));
}

TEST(LoadDissimilarityCsv, DistinctErrors) {
  EXPECT_EQ(error_kind(",a,b\na,0,-1\nb,-1,0\n"), Kind::negative);
  EXPECT_EQ(error_kind(",a,b\na,0,NaN\nb,NaN,0\n"), Kind::not_a_number);
  EXPECT_EQ(error_kind(",a,b\na,0,x\nb,1,0\n"), Kind::not_a_number);
  EXPECT_EQ(error_kind(",a,b,c\na,0,1,1\nb,1,0,1\n"), Kind::non_square);
  EXPECT_EQ(error_kind(",a,b\na,0,1\nb,1\n"), Kind::non_square);
  EXPECT_EQ(error_kind(",a,a\na,0,1\na,1,0\n"), Kind::duplicate_label);
  EXPECT_EQ(error_kind(",a,b\na,0.5,1\nb,1,0\n"), Kind::nonzero_diagonal);
  EXPECT_EQ(error_kind(",a,b\nb,0,1\na,1,0\n"), Kind::label_mismatch);
}

TEST(LoadDissimilarityCsv, QuotedLabels) {
  const auto d = parse_dissimilarity_csv(",\"Hello, World\",\"say \"\"hi\"\"\"\n"
                                         "\"Hello, World\",0,2\n\"say \"\"hi\"\"\",2,0\n");
  EXPECT_EQ(d.labels()[0], "Hello, World");
  EXPECT_EQ(d.labels()[1], "say \"hi\"");
  EXPECT_EQ(parse_dissimilarity_csv(dissimilarity_to_csv(d)).labels(), d.labels());
}

TEST(DissimilarityRoundTrip, CsvBinaryCsvIsExact) {
  std::mt19937_64 rng(53);
  for (int trial = 0; trial < 10; ++trial) {
    const auto d = reference::random_matrix(2 + rng() % 40, rng);
    const auto via_binary = parse_dissimilarity_binary(dissimilarity_to_binary(d));
    EXPECT_EQ(via_binary.labels(), d.labels());
    EXPECT_TRUE(std::equal(d.condensed().begin(), d.condensed().end(), via_binary.condensed().begin()));
    const auto via_csv = parse_dissimilarity_csv(dissimilarity_to_csv(via_binary));
    EXPECT_TRUE(std::equal(d.condensed().begin(), d.condensed().end(), via_csv.condensed().begin()));
  }
}

TEST(BinaryFormat, Layout) {
  const DissimilarityMatrix d({"A", "Bc"}, {0.5});
  const std::string bytes = dissimilarity_to_binary(d);
  ASSERT_EQ(bytes.size(), 4u + 8 + 8 + 4 + 1 + 4 + 2);
  EXPECT_EQ(bytes.substr(0, 4), "PDM1");
  EXPECT_EQ(bytes[4], 2);
  for (int i = 5; i < 12; ++i) EXPECT_EQ(bytes[i], 0);
  // 0.5 = 0x3FE0000000000000, little-endian
  EXPECT_EQ(static_cast<unsigned char>(bytes[19]), 0x3F);
  EXPECT_EQ(static_cast<unsigned char>(bytes[18]), 0xE0);
  EXPECT_EQ(bytes[20], 1);
  EXPECT_EQ(bytes.substr(24, 1), "A");
  EXPECT_EQ(bytes[25], 2);
  EXPECT_EQ(bytes.substr(29), "Bc");
}

TEST(BinaryFormat, Errors) {
  EXPECT_THROW(parse_dissimilarity_binary("XXXX"), MatrixError);
  const DissimilarityMatrix d({"A", "B"}, {0.5});
  const std::string bytes = dissimilarity_to_binary(d);
  EXPECT_THROW(parse_dissimilarity_binary(bytes.substr(0, bytes.size() - 1)), MatrixError);
  EXPECT_THROW(parse_dissimilarity_binary(bytes + "x"), MatrixError);
  std::string inf = bytes;
  inf.replace(12, 8, std::string("\x00\x00\x00\x00\x00\x00\xF0\x7F", 8));
  EXPECT_THROW(parse_dissimilarity_binary(inf), MatrixError);
}

TEST(LoadDissimilarity, MissingFileNamesPath) {
  try {
    load_dissimilarity("/nonexistent/matrix.csv", MatrixFormat::csv);
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("/nonexistent/matrix.csv"), std::string::npos);
  }
}

TEST(DissimilarityMatrix, RejectsBadValues) {
  EXPECT_THROW(DissimilarityMatrix({"a", "b"}, {-0.1}), ValidationError);
  EXPECT_THROW(DissimilarityMatrix({"a", "b"}, {std::nan("")}), ValidationError);
  EXPECT_THROW(DissimilarityMatrix({"a"}, {}), ValidationError);
  EXPECT_THROW(DissimilarityMatrix({"a", "b"}, {1, 2}), ValidationError);
}

TEST(CenterScale, MeanZeroSdOne) {
  const FeatureMatrix f({"r0", "r1", "r2"}, 2, {1, 5, 2, 5, 3, 5}, {"x", "const"});
  const auto scaled = center_scale(f);
  ASSERT_EQ(scaled.features.cols(), 1u);
  EXPECT_EQ(scaled.dropped_columns, (std::vector<std::string>{"const"}));
  EXPECT_NEAR(scaled.features(0, 0), -1.0, 1e-15);
  EXPECT_NEAR(scaled.features(1, 0), 0.0, 1e-15);
  EXPECT_NEAR(scaled.features(2, 0), 1.0, 1e-15);
  // idempotent
  const auto again = center_scale(scaled.features);
  for (std::size_t r = 0; r < 3; ++r) EXPECT_NEAR(again.features(r, 0), scaled.features(r, 0), 1e-12);
}

TEST(CenterScale, AllConstantIsAnError) {
  EXPECT_THROW(center_scale(FeatureMatrix({"a", "b"}, 1, {5, 5})), ValidationError);
}

TEST(CorrelationDissimilarity, Examples) {
  const FeatureMatrix f({"u", "neg", "w"}, 3, {1, 2, 3, -1, -2, -3, 1, 2, 4});
  const auto d = correlation_dissimilarity(f);
  EXPECT_EQ(d(0, 0), 0.0);
  EXPECT_NEAR(d(0, 1), 2.0, 1e-15);
  // 1 - r with r = 0.9819805060619657 (numpy corrcoef)
  EXPECT_NEAR(d(0, 2), 0.01801949393803437, 1e-12);
}

TEST(CorrelationDissimilarity, ZeroVarianceRowNamed) {
  try {
    correlation_dissimilarity(FeatureMatrix({"ok", "flat"}, 3, {1, 2, 3, 4, 4, 4}));
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("flat"), std::string::npos);
  }
}

TEST(CorrelationDissimilarity, MatchesNaiveAndAffineInvariant) {
  std::mt19937_64 rng(59);
  std::normal_distribution<double> noise;
  std::uniform_real_distribution<double> slope(0.1, 10.0), shift(-50, 50);
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t n = 3 + rng() % 30, p = 2 + rng() % 20;
    std::vector<double> v(n * p), w(n * p);
    std::vector<std::string> labels;
    for (std::size_t r = 0; r < n; ++r) {
      labels.push_back("r" + std::to_string(r));
      const double a = slope(rng), b = shift(rng);
      for (std::size_t c = 0; c < p; ++c) {
        v[r * p + c] = noise(rng);
        w[r * p + c] = a * v[r * p + c] + b;
      }
    }
    const FeatureMatrix f(labels, p, v), g(labels, p, w);
    const auto fast = correlation_dissimilarity(f);
    const auto naive = reference::correlation_naive(f);
    const auto moved = correlation_dissimilarity(g);
    for (std::size_t k = 0; k < fast.condensed().size(); ++k) {
      EXPECT_NEAR(fast.condensed()[k], naive.condensed()[k], 1e-12);
      EXPECT_NEAR(fast.condensed()[k], moved.condensed()[k], 1e-10);
    }
  }
}

TEST(EuclideanDissimilarity, Examples) {
  const FeatureMatrix f({"o", "p", "o2"}, 2, {0, 0, 3, 4, 0, 0});
  const auto d = euclidean_dissimilarity(f);
  EXPECT_EQ(d(0, 1), 5.0);
  EXPECT_EQ(d(0, 2), 0.0);
  std::mt19937_64 rng(61);
  const FeatureMatrix r = reference::gaussian_blobs(5, 3, 2, rng);
  const auto fast = euclidean_dissimilarity(r);
  const auto naive = reference::euclidean_naive(r);
  for (std::size_t k = 0; k < fast.condensed().size(); ++k) {
    EXPECT_EQ(fast.condensed()[k], naive.condensed()[k]);
  }
}

TEST(FeatureCsv, RejectsIncompleteRows) {
  const auto load = parse_features_csv("name,f1,f2\na,1,2\nb,,3\nc,3,NA\nd,4,5\ne,2,9\n");
  EXPECT_EQ(load.rejected_rows, (std::vector<std::string>{"b", "c"}));
  EXPECT_EQ(load.features.rows(), 3u);
  EXPECT_EQ(load.features.column_names(), (std::vector<std::string>{"f1", "f2"}));
  EXPECT_EQ(load.features(1, 1), 5.0);
}

TEST(LabelManifest, TextManifest) {
  const LabelSet set = parse_label_manifest(
      R"({"id":"names","kind":"text","entries":{"a":{"label":"Alpha"},"b":{"label":"Beta"},
          "c":{"label":"Gamma"},"d":{"label":"Delta","tooltip":"fourth"}}})");
  EXPECT_EQ(set.id, "names");
  EXPECT_EQ(set.kind, LabelKind::text);
  EXPECT_EQ(set.entries.size(), 4u);
  EXPECT_EQ(set.entries.at("d").tooltip, "fourth");
  const auto bound = bind_labels(set, testing::four_point_tree());
  EXPECT_EQ(bound.display, (std::vector<std::string>{"Alpha", "Beta", "Gamma", "Delta"}));
  EXPECT_EQ(bound.tooltips[3], "fourth");
  EXPECT_FALSE(bound.tooltips[0]);
}

TEST(LabelManifest, ImageManifestMissingLeaf) {
  const LabelSet set = parse_label_manifest(
      R"({"id":"thumbs","kind":"image","assets_root":"img",
          "entries":{"a":{"image":"a.png"},"b":{"image":"b.png"},"c":{"image":"c.png"}}})");
  EXPECT_EQ(set.kind, LabelKind::image);
  EXPECT_EQ(set.assets_root, "img");
  EXPECT_EQ(missing_leaves(set, testing::four_point_tree()), (std::vector<std::string>{"d"}));
  try {
    bind_labels(set, testing::four_point_tree());
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("[\"d\"]"), std::string::npos) << e.what();
  }
}

TEST(LabelManifest, Errors) {
  EXPECT_THROW(parse_label_manifest("{not json"), ValidationError);
  EXPECT_THROW(parse_label_manifest(R"({"id":"x","kind":"video","entries":{}})"), ValidationError);
  EXPECT_THROW(parse_label_manifest(R"({"id":"x","kind":"text","entries":{"a":{"label":"1"},"a":{"label":"2"}}})"),
               ValidationError);
  EXPECT_THROW(parse_label_manifest(R"({"id":"x","kind":"image","entries":{"a":{"label":"1"}}})"),
               ValidationError);
}

TEST(LabelManifest, MissingImagesDetected) {
  const auto dir = testing::scratch_dir("images");
  write_file(dir / "a.png", "png");
  const LabelSet set = parse_label_manifest(
      R"({"id":"t","kind":"image","entries":{"a":{"image":"a.png"},"b":{"image":"b.png"}}})");
  EXPECT_EQ(missing_images(set, dir), (std::vector<std::string>{"b.png"}));
}

}  // namespace
}  // namespace prototree
