#pragma once

#include <filesystem>
#include <string_view>

#include "mediacert/bytes.hpp"

namespace mediacert {

/// Throws Error(FileNotFound) if `path` does not exist, Error(IoError) if it
/// cannot be read.
Bytes read_file(const std::filesystem::path& path);

/// Writes via a temporary file in the same directory and renames it over
/// `path`. Throws Error(IoError).
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

}  // namespace mediacert
