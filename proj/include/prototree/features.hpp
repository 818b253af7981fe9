#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "prototree/dissimilarity.hpp"

namespace prototree {

/// n x p row-major matrix of finite reals with unique row labels.
class FeatureMatrix {
 public:
  FeatureMatrix(std::vector<std::string> row_labels, std::size_t cols, std::vector<double> values,
                std::vector<std::string> column_names = {});

  std::size_t rows() const noexcept { return row_labels_.size(); }
  std::size_t cols() const noexcept { return cols_; }
  const std::vector<std::string>& row_labels() const noexcept { return row_labels_; }
  const std::vector<std::string>& column_names() const noexcept { return column_names_; }
  const std::vector<double>& values() const noexcept { return values_; }

  double operator()(std::size_t r, std::size_t c) const noexcept { return values_[r * cols_ + c]; }
  std::span<const double> row(std::size_t r) const noexcept {
    return {values_.data() + r * cols_, cols_};
  }

 private:
  std::vector<std::string> row_labels_;
  std::size_t cols_;
  std::vector<double> values_;
  std::vector<std::string> column_names_;
};

struct FeatureLoad {
  FeatureMatrix features;
  /// Labels of rows dropped for missing or non-numeric cells.
  std::vector<std::string> rejected_rows;
};

/// CSV with a header row (first cell names the label column) and one row per
/// observation. Empty, NA and NaN cells mark a row incomplete; such rows are
/// dropped and reported, never imputed.
FeatureLoad load_features_csv(const std::filesystem::path& path);
FeatureLoad parse_features_csv(std::string_view text);

struct ScaledFeatures {
  FeatureMatrix features;
  /// Names (or 0-based indices) of constant columns that were dropped.
  std::vector<std::string> dropped_columns;
};

/// Centres each column to mean 0 and scales to sample standard deviation 1.
/// Constant columns are dropped; throws if every column is constant.
ScaledFeatures center_scale(const FeatureMatrix& f);

/// One minus the Pearson correlation between rows. Parallel over rows.
DissimilarityMatrix correlation_dissimilarity(const FeatureMatrix& f);

/// Euclidean distance between rows. Parallel over rows.
DissimilarityMatrix euclidean_dissimilarity(const FeatureMatrix& f);

}  // namespace prototree
