#include "prototree/features.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numeric>

#include "prototree/error.hpp"
#include "prototree/matrix_io.hpp"

namespace prototree {

FeatureMatrix::FeatureMatrix(std::vector<std::string> row_labels, std::size_t cols,
                             std::vector<double> values, std::vector<std::string> column_names)
    : row_labels_(std::move(row_labels)),
      cols_(cols),
      values_(std::move(values)),
      column_names_(std::move(column_names)) {
  validate_labels(row_labels_);
  if (cols_ == 0) throw ValidationError("feature matrix has no columns");
  if (values_.size() != row_labels_.size() * cols_) {
    throw ValidationError("feature matrix size does not match rows x cols");
  }
  if (!column_names_.empty() && column_names_.size() != cols_) {
    throw ValidationError("column name count does not match column count");
  }
  for (std::size_t k = 0; k < values_.size(); ++k) {
    if (!std::isfinite(values_[k])) {
      throw ValidationError("non-finite feature in row '" + row_labels_[k / cols_] + "'");
    }
  }
}

namespace {

bool is_missing(std::string_view cell) {
  return cell.empty() || cell == "NA" || cell == "NaN" || cell == "nan" || cell == "NULL";
}

std::string column_name(const FeatureMatrix& f, std::size_t c) {
  return f.column_names().empty() ? std::to_string(c) : f.column_names()[c];
}

}  // namespace

FeatureLoad parse_features_csv(std::string_view text) {
  const auto rows = parse_csv(text);
  if (rows.size() < 2) throw ValidationError("feature CSV needs a header row and data rows");
  const std::size_t cols = rows[0].size() - 1;
  if (cols == 0) throw ValidationError("feature CSV has no feature columns");
  std::vector<std::string> names(rows[0].begin() + 1, rows[0].end());
  std::vector<std::string> labels;
  std::vector<double> values;
  std::vector<std::string> rejected;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.size() != cols + 1) {
      throw ValidationError("feature CSV row " + std::to_string(r) + " has " +
                            std::to_string(row.size() - 1) + " values, expected " + std::to_string(cols));
    }
    std::vector<double> parsed(cols);
    bool complete = true;
    for (std::size_t c = 0; c < cols && complete; ++c) {
      const std::string& cell = row[c + 1];
      char* end = nullptr;
      if (is_missing(cell)) {
        complete = false;
        break;
      }
      parsed[c] = std::strtod(cell.c_str(), &end);
      complete = end != cell.c_str() && *end == '\0' && std::isfinite(parsed[c]);
    }
    if (!complete) {
      rejected.push_back(row[0]);
      continue;
    }
    labels.push_back(row[0]);
    values.insert(values.end(), parsed.begin(), parsed.end());
  }
  return {FeatureMatrix(std::move(labels), cols, std::move(values), std::move(names)),
          std::move(rejected)};
}

FeatureLoad load_features_csv(const std::filesystem::path& path) {
  return parse_features_csv(read_file(path));
}

ScaledFeatures center_scale(const FeatureMatrix& f) {
  const std::size_t n = f.rows();
  std::vector<std::size_t> kept;
  std::vector<double> mean(f.cols()), sd(f.cols());
  std::vector<std::string> dropped;
  for (std::size_t c = 0; c < f.cols(); ++c) {
    double sum = 0.0;
    for (std::size_t r = 0; r < n; ++r) sum += f(r, c);
    mean[c] = sum / static_cast<double>(n);
    double ss = 0.0;
    for (std::size_t r = 0; r < n; ++r) ss += (f(r, c) - mean[c]) * (f(r, c) - mean[c]);
    sd[c] = std::sqrt(ss / static_cast<double>(n - 1));
    if (sd[c] > 0.0) {
      kept.push_back(c);
    } else {
      dropped.push_back(column_name(f, c));
    }
  }
  if (kept.empty()) throw ValidationError("every feature column is constant");
  std::vector<double> values;
  values.reserve(n * kept.size());
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c : kept) values.push_back((f(r, c) - mean[c]) / sd[c]);
  }
  std::vector<std::string> names;
  if (!f.column_names().empty()) {
    for (std::size_t c : kept) names.push_back(f.column_names()[c]);
  }
  return {FeatureMatrix(f.row_labels(), kept.size(), std::move(values), std::move(names)),
          std::move(dropped)};
}

DissimilarityMatrix correlation_dissimilarity(const FeatureMatrix& f) {
  const std::size_t n = f.rows();
  const std::size_t p = f.cols();
  // Rows centred and scaled to unit norm: correlation is then a dot product.
  std::vector<double> z(n * p);
  for (std::size_t r = 0; r < n; ++r) {
    const auto row = f.row(r);
    const double mean = std::accumulate(row.begin(), row.end(), 0.0) / static_cast<double>(p);
    double ss = 0.0;
    for (double v : row) ss += (v - mean) * (v - mean);
    if (!(ss > 0.0)) {
      throw ValidationError("row '" + f.row_labels()[r] + "' has zero variance");
    }
    const double norm = std::sqrt(ss);
    for (std::size_t c = 0; c < p; ++c) z[r * p + c] = (row[c] - mean) / norm;
  }
  std::vector<double> out(n * (n - 1) / 2);
  const auto rows = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(dynamic, 8)
  for (std::ptrdiff_t i = 0; i < rows; ++i) {
    const double* zi = z.data() + i * p;
    for (std::size_t j = i + 1; j < n; ++j) {
      const double* zj = z.data() + j * p;
      double dot = 0.0;
      for (std::size_t c = 0; c < p; ++c) dot += zi[c] * zj[c];
      out[condensed_index(n, i, j)] = std::clamp(1.0 - dot, 0.0, 2.0);
    }
  }
  return {f.row_labels(), std::move(out)};
}

DissimilarityMatrix euclidean_dissimilarity(const FeatureMatrix& f) {
  const std::size_t n = f.rows();
  const std::size_t p = f.cols();
  const double* x = f.values().data();
  std::vector<double> out(n * (n - 1) / 2);
  const auto rows = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(dynamic, 8)
  for (std::ptrdiff_t i = 0; i < rows; ++i) {
    const double* xi = x + i * p;
    for (std::size_t j = i + 1; j < n; ++j) {
      const double* xj = x + j * p;
      double ss = 0.0;
      for (std::size_t c = 0; c < p; ++c) ss += (xi[c] - xj[c]) * (xi[c] - xj[c]);
      out[condensed_index(n, i, j)] = std::sqrt(ss);
    }
  }
  return {f.row_labels(), std::move(out)};
}

}  // namespace prototree
