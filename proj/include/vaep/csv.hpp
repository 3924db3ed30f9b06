#pragma once

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace vaep::io {

// Shortest decimal text that parses back to the same double.
std::string format_double(double value);
double parse_double(std::string_view text);
long long parse_int(std::string_view text);

// RFC 4180 style field handling: quotes only when needed.
std::string csv_escape(std::string_view field);
std::vector<std::string> split_csv_line(std::string_view line);
std::string join_csv(const std::vector<std::string>& fields);

// Reads a whole CSV file; the first row is returned as the header.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  // Index of a header column, or throws MalformedFile naming the column.
  std::size_t column(std::string_view name) const;
};
CsvTable read_csv(const std::filesystem::path& path);

std::string read_text(const std::filesystem::path& path);

// Writes through a sibling temporary file and renames it over the target, so
// a failed run never leaves a partial artifact at the final path.
void write_atomic(const std::filesystem::path& path,
                  const std::function<void(std::ostream&)>& writer);
void write_text_atomic(const std::filesystem::path& path, std::string_view text);

}  // namespace vaep::io
