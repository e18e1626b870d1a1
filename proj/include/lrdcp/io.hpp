#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace lrdcp::io {

/// Parses one value per line. Blank lines are skipped; anything else that is
/// not a finite decimal number raises ParseError carrying the 1-based line.
std::vector<double> parse_series_csv(std::string_view text);
std::vector<double> read_series_csv(const std::filesystem::path& path);

/// One value per line, no header, 17 significant digits.
std::string format_series_csv(std::span<const double> values);

/// Writes through a sibling temporary file and renames it into place, so
/// readers never observe a partially written file.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

std::string read_file(const std::filesystem::path& path);

}  // namespace lrdcp::io
