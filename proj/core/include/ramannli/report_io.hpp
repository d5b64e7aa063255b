#pragma once

#include <filesystem>
#include <string>

namespace ramannli {

/// 9 significant digits, scientific, '.' separator, independent of locale.
std::string format_number(double value);

/// Writes `content` to `path` in one go, creating parent directories.
void write_text_file(const std::filesystem::path& path, const std::string& content);

}  // namespace ramannli
