#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace prototree {

using LeafId = std::uint32_t;

/// Position of pair (i, j), i < j, in the row-major condensed upper triangle.
constexpr std::size_t condensed_index(std::size_t n, std::size_t i, std::size_t j) noexcept {
  return i * n - i * (i + 1) / 2 + j - i - 1;
}

/// Inverse of condensed_index.
std::pair<std::size_t, std::size_t> condensed_pair(std::size_t n, std::size_t index);

/// Symmetric pairwise dissimilarities between n labelled observations,
/// stored as the condensed upper triangle. Construction validates every
/// value, so a live object always satisfies the invariants.
class DissimilarityMatrix {
 public:
  DissimilarityMatrix(std::vector<std::string> labels, std::vector<double> condensed);

  std::size_t size() const noexcept { return labels_.size(); }
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  std::span<const double> condensed() const noexcept { return values_; }

  double operator()(std::size_t i, std::size_t j) const noexcept {
    if (i == j) return 0.0;
    if (i > j) std::swap(i, j);
    return values_[condensed_index(labels_.size(), i, j)];
  }

 private:
  std::vector<std::string> labels_;
  std::vector<double> values_;
};

/// Throws ValidationError naming the first offending label or entry.
void validate_labels(const std::vector<std::string>& labels);

}  // namespace prototree
