#pragma once

#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "prototree/agglomerate.hpp"
#include "reference/reference.hpp"

namespace prototree::testing {

/// Points 0,1,10,11 labelled a,b,c,d; minimax heights [1,1,10].
inline Dendrogram four_point_tree() {
  return agglomerate(reference::line_matrix({0, 1, 10, 11}, {"a", "b", "c", "d"}), Linkage::minimax);
}

/// Points 0,1,3; minimax heights [1,2].
inline Dendrogram three_point_tree() {
  return agglomerate(reference::line_matrix({0, 1, 3}), Linkage::minimax);
}

/// Fresh empty directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("prototree_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace prototree::testing
