#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

namespace pwl {

// Writes to a temp file in the target directory and renames into place, so
// readers never observe a partially written artifact.
void atomic_write_file(const std::filesystem::path& path, const std::string& content);

std::string read_file(const std::filesystem::path& path);

std::uint64_t fnv1a_hash(const std::string& data);
std::string hash_hex(std::uint64_t h);

}  // namespace pwl
