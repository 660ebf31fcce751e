#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace nids {

std::string read_text_file(const std::filesystem::path& path);

// Writes to a temp file in the same directory, then renames over the target,
// so readers never observe a partially written file.
void write_text_file_atomic(const std::filesystem::path& path, const std::string& content);

// FNV-1a (64-bit) over raw bytes.
std::uint64_t fnv1a64(std::string_view bytes);
std::string to_hex(std::uint64_t value);

// Standard-alphabet base64 with strict '=' padding; decode throws
// CorruptArtifactError on any malformed input.
std::string base64_encode(std::string_view bytes);
std::string base64_decode(std::string_view text);

// float64 <-> explicit little-endian bytes, for platform-independent
// serialized tensors.
std::string doubles_to_le_bytes(std::span<const double> values);
std::vector<double> le_bytes_to_doubles(std::string_view bytes);

}  // namespace nids
