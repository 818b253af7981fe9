#include "prototree/dissimilarity.hpp"

#include <cmath>
#include <unordered_set>

#include "prototree/error.hpp"

namespace prototree {

std::pair<std::size_t, std::size_t> condensed_pair(std::size_t n, std::size_t index) {
  // Row i starts at i*n - i*(i+1)/2 and holds n-1-i entries.
  std::size_t i = 0;
  std::size_t start = 0;
  while (i + 1 < n && start + (n - 1 - i) <= index) {
    start += n - 1 - i;
    ++i;
  }
  return {i, i + 1 + (index - start)};
}

void validate_labels(const std::vector<std::string>& labels) {
  if (labels.size() < 2) {
    throw ValidationError("need at least 2 observations, got " + std::to_string(labels.size()));
  }
  std::unordered_set<std::string_view> seen;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i].empty()) throw ValidationError("empty label at row " + std::to_string(i));
    if (!seen.insert(labels[i]).second) {
      throw ValidationError("duplicate label '" + labels[i] + "' at row " + std::to_string(i));
    }
  }
}

DissimilarityMatrix::DissimilarityMatrix(std::vector<std::string> labels,
                                         std::vector<double> condensed)
    : labels_(std::move(labels)), values_(std::move(condensed)) {
  validate_labels(labels_);
  const std::size_t n = labels_.size();
  if (values_.size() != n * (n - 1) / 2) {
    throw ValidationError("condensed matrix for n=" + std::to_string(n) + " needs " +
                          std::to_string(n * (n - 1) / 2) + " values, got " +
                          std::to_string(values_.size()));
  }
  for (std::size_t k = 0; k < values_.size(); ++k) {
    const double v = values_[k];
    if (std::isfinite(v) && v >= 0.0) continue;
    const auto [i, j] = condensed_pair(n, k);
    throw ValidationError((std::isnan(v) ? "NaN" : !std::isfinite(v) ? "non-finite" : "negative") +
                          std::string(" dissimilarity at (") + std::to_string(i) + "," +
                          std::to_string(j) + ")");
  }
}

}  // namespace prototree
