#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace fpp {

/// Shortest round-trip decimal form; identical across runs and platforms
/// that share IEEE doubles.
std::string format_double(double x);

/// Writes the whole file or throws IoError.
void write_text_file(const std::filesystem::path& path, std::string_view contents);

/// Creates the directory (and parents) or throws IoError.
void ensure_directory(const std::filesystem::path& dir);

}  // namespace fpp
