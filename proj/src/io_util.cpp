#include "detkit/io_util.hpp"

#include <cstdio>
#include <fstream>
#include <system_error>

#include "detkit/errors.hpp"

namespace detkit {

namespace {

void write_atomic_impl(const std::filesystem::path& path, const char* data,
                       std::size_t size) {
  std::error_code ec;
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw IoError("cannot open for writing: " + tmp.string());
    }
    out.write(data, static_cast<std::streamsize>(size));
    out.flush();
    if (!out) {
      std::filesystem::remove(tmp, ec);
      throw IoError("write failed: " + tmp.string());
    }
  }
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw IoError("rename failed: " + path.string());
  }
}

}  // namespace

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open file: " + path.string());
  }
  std::string content((std::istreambuf_iterator<char>(in)),
                      std::istreambuf_iterator<char>());
  if (in.bad()) {
    throw IoError("read failed: " + path.string());
  }
  return content;
}

void write_file_atomic(const std::filesystem::path& path,
                       std::string_view content) {
  write_atomic_impl(path, content.data(), content.size());
}

void write_file_atomic(const std::filesystem::path& path,
                       const std::vector<unsigned char>& content) {
  write_atomic_impl(path, reinterpret_cast<const char*>(content.data()),
                    content.size());
}

}  // namespace detkit
