#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace detkit {

// Read a whole file; IoError names the path on failure.
std::string read_file(const std::filesystem::path& path);

// Write via a temp file in the same directory plus rename, so a failure
// never leaves a partial file at `path`. Parent directories are created.
void write_file_atomic(const std::filesystem::path& path,
                       std::string_view content);
void write_file_atomic(const std::filesystem::path& path,
                       const std::vector<unsigned char>& content);

}  // namespace detkit
