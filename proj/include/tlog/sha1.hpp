#pragma once

#include <cstdint>
#include <string>

namespace tlog {

// Lowercase hex SHA-1 digest of a byte string.
std::string sha1_hex(const std::string& data);

// Hash of a file's bytes in git blob form: sha1("blob <len>\0" + bytes).
std::string git_blob_hash(const std::string& path);

}  // namespace tlog
