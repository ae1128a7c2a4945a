#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

namespace swreg {

/// Writes `content` to a temporary file next to `path`, then renames it into
/// place, so readers never observe a half-written file. Parent directories
/// are created. Failures raise ResourceError.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

std::string read_file(const std::filesystem::path& path);

/// 16 lowercase hex digits.
std::string hex64(std::uint64_t value);

/// Filename-safe tag for a sigma value: 1 -> "1", 1.5 -> "1.5".
std::string sigma_tag(double sigma);

}  // namespace swreg
