#include "pred/csv.hpp"

#include <fstream>

#include "pred/error.hpp"

namespace pred::csv {

std::vector<std::string> split_record(std::string_view line, std::size_t line_no) {
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  bool was_quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field.push_back(c);
      }
      continue;
    }
    if (c == '"') {
      if (!field.empty() || was_quoted) {
        throw ParseError("unexpected quote inside unquoted field", line_no);
      }
      quoted = true;
      was_quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
      was_quoted = false;
    } else if (c == '\r' && i + 1 == line.size()) {
      // tolerate CRLF
    } else {
      field.push_back(c);
    }
  }
  if (quoted) throw ParseError("unterminated quoted field", line_no);
  fields.push_back(std::move(field));
  return fields;
}

std::string escape(std::string_view field) {
  if (field.find_first_of(",\"\n\r") == std::string_view::npos) {
    return std::string(field);
  }
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

int Table::column(std::string_view name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return static_cast<int>(i);
  }
  return -1;
}

Table read(std::istream& in, bool allow_short_rows) {
  Table table;
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    if (!have_header) {
      // strip a UTF-8 byte order mark
      if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
      table.header = split_record(line, line_no);
      have_header = true;
      continue;
    }
    auto fields = split_record(line, line_no);
    if (fields.size() > table.header.size() ||
        (!allow_short_rows && fields.size() != table.header.size())) {
      throw ParseError("expected " + std::to_string(table.header.size()) +
                           " fields, found " + std::to_string(fields.size()),
                       line_no);
    }
    table.rows.emplace_back(line_no, std::move(fields));
  }
  if (!have_header) throw ParseError("missing header row", 1);
  return table;
}

Table read_file(const std::filesystem::path& path, bool allow_short_rows) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  return read(in, allow_short_rows);
}

}  // namespace pred::csv
