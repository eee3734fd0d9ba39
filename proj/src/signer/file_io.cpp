#include <fstream>
#include <iterator>
#include <random>
#include <system_error>

#include "mediacert/error.hpp"
#include "mediacert/file_io.hpp"

namespace mediacert {

namespace fs = std::filesystem;

Bytes read_file(const fs::path& path) {
  std::error_code ec;
  if (!fs::exists(path, ec)) throw Error(Errc::FileNotFound, path.string());
  if (fs::is_directory(path, ec)) throw Error(Errc::IoError, path.string() + " is a directory");
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::IoError, "cannot open " + path.string());
  Bytes data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw Error(Errc::IoError, "read failed: " + path.string());
  return data;
}

void write_file_atomic(const fs::path& path, std::string_view content) {
  thread_local std::mt19937_64 rng{std::random_device{}()};
  fs::path tmp = path;
  tmp += ".tmp-" + std::to_string(rng());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(Errc::IoError, "cannot create " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) {
      std::error_code ignored;
      fs::remove(tmp, ignored);
      throw Error(Errc::IoError, "write failed: " + tmp.string());
    }
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    std::error_code ignored;
    fs::remove(tmp, ignored);
    throw Error(Errc::IoError, "rename to " + path.string() + ": " + ec.message());
  }
}

}  // namespace mediacert
