#pragma once

#include <filesystem>
#include <string>

#include "prototree/dendrogram.hpp"

namespace prototree {

inline constexpr int kTreeFormatVersion = 1;

/// Canonical serialization of every tree field except the digest. Two equal
/// dendrograms always produce the same bytes.
std::string canonical_tree_bytes(const Dendrogram& dend);

/// Hex SHA-256 of canonical_tree_bytes.
std::string tree_digest(const Dendrogram& dend);

/// Tree file: JSON {format_version, n, labels, merges:[{left,right,height}],
/// prototypes, order, linkage, digest}.
std::string tree_to_json(const Dendrogram& dend);
/// Parses and validates a tree file, including its digest.
Dendrogram tree_from_json(std::string_view text);

void save_tree(const Dendrogram& dend, const std::filesystem::path& path);
Dendrogram load_tree(const std::filesystem::path& path);

/// R hclust-style merge table: one row per merge, leaves as -(i+1), merge k
/// as k+1, with height and prototype label columns.
std::string hclust_table_csv(const Dendrogram& dend);

}  // namespace prototree
