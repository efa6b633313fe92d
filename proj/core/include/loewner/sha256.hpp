#pragma once

#include <cstddef>
#include <string>

namespace loewner {

/// SHA-256 digest of a byte buffer, as 64 lowercase hex characters.
std::string sha256_hex(const void* data, std::size_t size);

std::string sha256_hex(const std::string& data);

/// SHA-256 of a file's contents. Throws std::runtime_error if the file
/// cannot be read.
std::string sha256_file_hex(const std::string& path);

}  // namespace loewner
