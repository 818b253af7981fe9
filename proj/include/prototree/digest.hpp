#pragma once

#include <span>
#include <string>
#include <string_view>

namespace prototree {

/// Lower-case hex SHA-256.
std::string sha256_hex(std::string_view bytes);

}  // namespace prototree
