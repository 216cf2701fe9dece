#include "fpp/io.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>

#include "fpp/error.hpp"

namespace fpp {

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  return {buf.data(), res.ptr};
}

void write_text_file(const std::filesystem::path& path, std::string_view contents) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw IoError("cannot open " + path.string() + " for writing");
  os.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!os) throw IoError("failed writing " + path.string());
}

void ensure_directory(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create directory " + dir.string() + ": " + ec.message());
}

}  // namespace fpp
