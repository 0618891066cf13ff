#pragma once

#include <filesystem>
#include <istream>
#include <string>
#include <string_view>
#include <vector>

namespace pred::csv {

// Splits one CSV record. Supports double-quoted fields with "" escapes;
// quoted fields may not span lines.
std::vector<std::string> split_record(std::string_view line, std::size_t line_no);

// Quotes a field when it contains a comma, quote, or newline.
std::string escape(std::string_view field);

struct Table {
  std::vector<std::string> header;
  // Each row paired with its 1-based line number in the source file.
  std::vector<std::pair<std::size_t, std::vector<std::string>>> rows;

  // Index of a header column or -1.
  int column(std::string_view name) const;
};

// Reads a header row and all data rows. Blank lines are skipped; a row with a
// field count different from the header raises ParseError.
Table read(std::istream& in, bool allow_short_rows = false);
Table read_file(const std::filesystem::path& path, bool allow_short_rows = false);

}  // namespace pred::csv
