#include "prototree/matrix_io.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <sstream>
#include <unordered_map>

namespace prototree {

namespace {

constexpr double kSymmetryTolerance = 1e-12;
constexpr double kDiagonalTolerance = 1e-12;
constexpr std::string_view kMagic = "PDM1";

using Kind = MatrixError::Kind;

std::string cell(std::size_t i, std::size_t j) {
  return "(" + std::to_string(i) + "," + std::to_string(j) + ")";
}

bool parse_number(std::string_view text, double& out) {
  while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
  while (!text.empty() && (text.back() == ' ' || text.back() == '\t')) text.remove_suffix(1);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  if (text.empty()) return false;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  return ec == std::errc() && end == text.data() + text.size();
}

template <typename T>
void put_le(std::string& out, T value) {
  static_assert(std::is_unsigned_v<T>);
  for (std::size_t b = 0; b < sizeof(T); ++b) out.push_back(static_cast<char>((value >> (8 * b)) & 0xFF));
}

template <typename T>
T get_le(std::string_view bytes, std::size_t& pos) {
  if (pos + sizeof(T) > bytes.size()) {
    throw MatrixError(Kind::truncated, "binary matrix truncated at byte " + std::to_string(pos));
  }
  T value = 0;
  for (std::size_t b = 0; b < sizeof(T); ++b) {
    value |= static_cast<T>(static_cast<unsigned char>(bytes[pos + b])) << (8 * b);
  }
  pos += sizeof(T);
  return value;
}

}  // namespace

std::vector<std::vector<std::string>> parse_csv(std::string_view text) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false;
  bool row_has_content = false;
  const auto end_field = [&] {
    row.push_back(std::move(field));
    field.clear();
  };
  const auto end_row = [&] {
    end_field();
    if (row_has_content || row.size() > 1) rows.push_back(std::move(row));
    row.clear();
    row_has_content = false;
  };
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field.push_back(c);
      }
      continue;
    }
    switch (c) {
      case '"': quoted = true; row_has_content = true; break;
      case ',': end_field(); break;
      case '\r': break;
      case '\n': end_row(); break;
      default: field.push_back(c); row_has_content = true;
    }
  }
  if (quoted) throw MatrixError(Kind::malformed, "unterminated quoted CSV field");
  if (row_has_content || !row.empty()) end_row();
  return rows;
}

std::string csv_escape(std::string_view field) {
  if (field.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

std::string format_double(double value) {
  std::array<char, 32> buf{};
  const auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return {buf.data(), end};
}

DissimilarityMatrix parse_dissimilarity_csv(std::string_view text) {
  const auto rows = parse_csv(text);
  if (rows.empty()) throw MatrixError(Kind::malformed, "empty dissimilarity CSV");
  const std::vector<std::string> header(rows[0].begin() + 1, rows[0].end());
  const std::size_t n = header.size();
  if (rows.size() - 1 != n) {
    throw MatrixError(Kind::non_square, "matrix is not square: " + std::to_string(n) +
                                            " column labels but " + std::to_string(rows.size() - 1) +
                                            " rows");
  }
  std::unordered_map<std::string_view, std::size_t> seen;
  for (std::size_t i = 0; i < n; ++i) {
    if (!seen.emplace(header[i], i).second) {
      throw MatrixError(Kind::duplicate_label, "duplicate label '" + header[i] + "' at column " +
                                                   std::to_string(i), -1, static_cast<long>(i));
    }
  }
  std::vector<double> full(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& row = rows[i + 1];
    if (row.size() != n + 1) {
      throw MatrixError(Kind::non_square, "row " + std::to_string(i) + " has " +
                                              std::to_string(row.size() - 1) + " values, expected " +
                                              std::to_string(n), static_cast<long>(i));
    }
    if (row[0] != header[i]) {
      throw MatrixError(Kind::label_mismatch, "row " + std::to_string(i) + " label '" + row[0] +
                                                  "' does not match column label '" + header[i] + "'",
                        static_cast<long>(i));
    }
    for (std::size_t j = 0; j < n; ++j) {
      double v = 0;
      if (!parse_number(row[j + 1], v) || std::isnan(v) || !std::isfinite(v)) {
        throw MatrixError(Kind::not_a_number, "non-numeric or non-finite value '" + row[j + 1] +
                                                  "' at " + cell(i, j),
                          static_cast<long>(i), static_cast<long>(j));
      }
      full[i * n + j] = v;
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double v = full[i * n + j];
      if (v < 0.0) {
        throw MatrixError(Kind::negative, "negative dissimilarity at " + cell(i, j),
                          static_cast<long>(i), static_cast<long>(j));
      }
      if (i == j && v > kDiagonalTolerance) {
        throw MatrixError(Kind::nonzero_diagonal, "non-zero diagonal at " + cell(i, j),
                          static_cast<long>(i), static_cast<long>(j));
      }
      if (j > i) {
        const double w = full[j * n + i];
        if (std::abs(v - w) > kSymmetryTolerance * std::max(std::abs(v), std::abs(w))) {
          throw MatrixError(Kind::asymmetric, "asymmetric dissimilarity at " + cell(i, j) + ": " +
                                                  format_double(v) + " vs " + format_double(w),
                            static_cast<long>(i), static_cast<long>(j));
        }
      }
    }
  }
  std::vector<double> condensed;
  condensed.reserve(n * (n - 1) / 2);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) condensed.push_back(full[i * n + j]);
  }
  return {header, std::move(condensed)};
}

std::string dissimilarity_to_csv(const DissimilarityMatrix& d) {
  std::string out;
  for (const auto& label : d.labels()) out += "," + csv_escape(label);
  out += "\n";
  for (std::size_t i = 0; i < d.size(); ++i) {
    out += csv_escape(d.labels()[i]);
    for (std::size_t j = 0; j < d.size(); ++j) out += "," + format_double(d(i, j));
    out += "\n";
  }
  return out;
}

DissimilarityMatrix parse_dissimilarity_binary(std::string_view bytes) {
  if (bytes.substr(0, kMagic.size()) != kMagic) {
    throw MatrixError(Kind::malformed, "binary matrix does not start with magic PDM1");
  }
  std::size_t pos = kMagic.size();
  const auto n = get_le<std::uint64_t>(bytes, pos);
  if (n < 2 || n > (1ull << 32)) throw MatrixError(Kind::malformed, "implausible n=" + std::to_string(n));
  const std::size_t count = n * (n - 1) / 2;
  if (bytes.size() - pos < count * 8) {
    throw MatrixError(Kind::truncated, "binary matrix truncated: expected " + std::to_string(count) +
                                           " values");
  }
  std::vector<double> values(count);
  for (std::size_t k = 0; k < count; ++k) {
    const auto bits = get_le<std::uint64_t>(bytes, pos);
    std::memcpy(&values[k], &bits, sizeof bits);
    if (!std::isfinite(values[k])) {
      const auto [i, j] = condensed_pair(n, k);
      throw MatrixError(Kind::not_a_number, "non-finite value at " + cell(i, j),
                        static_cast<long>(i), static_cast<long>(j));
    }
  }
  std::vector<std::string> labels;
  labels.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto len = get_le<std::uint32_t>(bytes, pos);
    if (bytes.size() - pos < len) throw MatrixError(Kind::truncated, "label " + std::to_string(i) + " truncated");
    labels.emplace_back(bytes.substr(pos, len));
    pos += len;
  }
  if (pos != bytes.size()) throw MatrixError(Kind::malformed, "trailing bytes after labels");
  return {std::move(labels), std::move(values)};
}

std::string dissimilarity_to_binary(const DissimilarityMatrix& d) {
  std::string out(kMagic);
  put_le<std::uint64_t>(out, d.size());
  for (double v : d.condensed()) {
    std::uint64_t bits = 0;
    std::memcpy(&bits, &v, sizeof bits);
    put_le(out, bits);
  }
  for (const auto& label : d.labels()) {
    put_le<std::uint32_t>(out, static_cast<std::uint32_t>(label.size()));
    out += label;
  }
  return out;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot read file: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return std::move(buf).str();
}

void write_file(const std::filesystem::path& path, std::string_view bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write file: " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error("write failed: " + path.string());
}

DissimilarityMatrix load_dissimilarity(const std::filesystem::path& path, MatrixFormat format) {
  const std::string bytes = read_file(path);
  return format == MatrixFormat::csv ? parse_dissimilarity_csv(bytes) : parse_dissimilarity_binary(bytes);
}

void save_dissimilarity(const DissimilarityMatrix& d, const std::filesystem::path& path,
                        MatrixFormat format) {
  write_file(path, format == MatrixFormat::csv ? dissimilarity_to_csv(d) : dissimilarity_to_binary(d));
}

}  // namespace prototree
