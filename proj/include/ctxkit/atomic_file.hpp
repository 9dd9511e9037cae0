#pragma once

#include <filesystem>
#include <string_view>

namespace ctxkit {

/// Writes `contents` to a sibling temporary file and renames it over
/// `path`, so readers never observe a partial file. Throws Error(Io).
void write_file_atomically(const std::filesystem::path& path, std::string_view contents);

/// Throws Error(Io) if the file cannot be read.
std::string read_file(const std::filesystem::path& path);

}  // namespace ctxkit
