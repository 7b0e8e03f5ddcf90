#pragma once

#include "mfx/series.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace mfx::io {

std::vector<std::string> split_fields(std::string_view line);

// Strict numeric parse of one field; nullopt-free: throws ParseError with the
// line number and column in the message.
double parse_number(std::string_view field, std::size_t line, std::size_t column);

// Header row plus string cells, blank lines skipped. Line numbers are 1-based
// and kept per row for error messages.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::size_t> line_numbers;

  // Index of a header column, or npos.
  std::size_t column(std::string_view name) const;
};

CsvTable parse_csv(std::string_view text);

// One numeric column (the first), with an optional one-line text header.
std::vector<double> parse_series_csv(std::string_view text);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view content);

// "%.6g"
std::string format_g6(double v);
// Shortest text that round-trips to the same double.
std::string format_exact(double v);

// FNV-1a 64-bit, as 16 lowercase hex digits.
std::string fnv1a64_hex(std::string_view bytes);

}  // namespace mfx::io
