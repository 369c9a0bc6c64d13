#pragma once

#include <string>

namespace climalens {

// Lowercase hex SHA-256 digest of a byte string.
std::string sha256_hex(const std::string& data);

// Digest of a file's contents; throws ConfigError if unreadable.
std::string sha256_file(const std::string& path);

}  // namespace climalens
