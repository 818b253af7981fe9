#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "prototree/dissimilarity.hpp"
#include "prototree/error.hpp"

namespace prototree {

enum class MatrixFormat { csv, binary };

/// Raised by the matrix loaders; `row`/`col` locate the first offending cell
/// (0-based data indices, header excluded) when there is one.
class MatrixError : public ValidationError {
 public:
  enum class Kind { malformed, non_square, label_mismatch, duplicate_label, not_a_number,
                    negative, nonzero_diagonal, asymmetric, truncated };

  MatrixError(Kind kind, std::string message, long row = -1, long col = -1)
      : ValidationError(std::move(message)), kind_(kind), row_(row), col_(col) {}

  Kind kind() const noexcept { return kind_; }
  long row() const noexcept { return row_; }
  long col() const noexcept { return col_; }

 private:
  Kind kind_;
  long row_;
  long col_;
};

/// Square CSV: header row of labels (first cell ignored), then one row per
/// observation starting with its label. Checks squareness, label agreement,
/// zero diagonal, non-negativity and symmetry within 1e-12 relative tolerance.
DissimilarityMatrix parse_dissimilarity_csv(std::string_view text);
std::string dissimilarity_to_csv(const DissimilarityMatrix& d);

/// "PDM1" binary: magic, u64 n, condensed f64 values, then u32-length-prefixed
/// UTF-8 labels. Everything little-endian.
DissimilarityMatrix parse_dissimilarity_binary(std::string_view bytes);
std::string dissimilarity_to_binary(const DissimilarityMatrix& d);

DissimilarityMatrix load_dissimilarity(const std::filesystem::path& path, MatrixFormat format);
void save_dissimilarity(const DissimilarityMatrix& d, const std::filesystem::path& path,
                        MatrixFormat format);

/// Whole-file read; throws ValidationError naming the path when unreadable.
std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view bytes);

/// Splits CSV text into rows of fields. Handles quoted fields, doubled quotes
/// and CRLF line ends; skips blank lines.
std::vector<std::vector<std::string>> parse_csv(std::string_view text);
/// Quotes a field when it contains a comma, quote or newline.
std::string csv_escape(std::string_view field);

/// Shortest decimal text that parses back to exactly `value`.
std::string format_double(double value);

}  // namespace prototree
