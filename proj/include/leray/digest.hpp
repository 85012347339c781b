#pragma once

#include <string>

namespace leray {

/// SHA-256 hex digest of a byte string / of a file's contents.
std::string sha256_hex(const std::string& bytes);
std::string sha256_file_hex(const std::string& path);

}  // namespace leray
