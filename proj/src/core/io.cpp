#include "lrdcp/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>
#include <unistd.h>

#include "lrdcp/error.hpp"

namespace lrdcp::io {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

}  // namespace

std::vector<double> parse_series_csv(std::string_view text) {
  std::vector<double> values;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto eol = text.find('\n', pos);
    const auto line = trim(text.substr(pos, eol == std::string_view::npos ? std::string_view::npos : eol - pos));
    ++line_no;
    if (!line.empty()) {
      double v = 0.0;
      const auto* begin = line.data();
      const auto* end = line.data() + line.size();
      if (*begin == '+') ++begin;
      auto [ptr, ec] = std::from_chars(begin, end, v);
      if (ec != std::errc() || ptr != end) {
        throw ParseError("malformed value '" + std::string(line) + "'", line_no);
      }
      if (!std::isfinite(v)) throw ParseError("non-finite value", line_no);
      values.push_back(v);
    }
    if (eol == std::string_view::npos) break;
    pos = eol + 1;
  }
  return values;
}

std::vector<double> read_series_csv(const std::filesystem::path& path) {
  return parse_series_csv(read_file(path));
}

std::string format_series_csv(std::span<const double> values) {
  std::string out;
  out.reserve(values.size() * 24);
  char buf[64];
  for (double v : values) {
    const int len = std::snprintf(buf, sizeof buf, "%.17g\n", v);
    out.append(buf, static_cast<std::size_t>(len));
  }
  return out;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
  const auto dir = path.has_parent_path() ? path.parent_path() : std::filesystem::path(".");
  std::random_device rd;
  const auto tmp = dir / ("." + path.filename().string() + ".tmp" + std::to_string(::getpid()) + "_" +
                          std::to_string(rd()));
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + tmp.string() + "' for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) {
      std::error_code ec;
      std::filesystem::remove(tmp, ec);
      throw IoError("write to '" + tmp.string() + "' failed");
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw IoError("cannot move output into '" + path.string() + "'");
  }
}

}  // namespace lrdcp::io
