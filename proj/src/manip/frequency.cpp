#include "pred/manip/frequency.hpp"

#include <cctype>
#include <charconv>
#include <cmath>

#include "pred/csv.hpp"
#include "pred/error.hpp"

namespace pred::manip {

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

}  // namespace

void FrequencyTable::set(std::string_view word, double per_billion) {
  if (!std::isfinite(per_billion) || per_billion < 0.0) {
    throw DomainError("invalid frequency for '" + std::string(word) + "'");
  }
  table_[lower(word)] = per_billion;
}

double FrequencyTable::per_billion(std::string_view word) const {
  auto it = table_.find(lower(word));
  return it == table_.end() ? 0.0 : it->second;
}

bool FrequencyTable::contains(std::string_view word) const {
  return table_.contains(lower(word));
}

FrequencyTable load_frequency_table(const std::filesystem::path& path) {
  const csv::Table t = csv::read_file(path);
  const int c_word = t.column("word");
  const int c_freq = t.column("per_billion");
  if (c_word < 0 || c_freq < 0) throw ParseError("frequency header must be word,per_billion", 1);
  FrequencyTable table;
  for (const auto& [line_no, f] : t.rows) {
    const std::string& s = f[c_freq];
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v) || v < 0.0) {
      throw ParseError("invalid per_billion '" + s + "'", line_no);
    }
    table.set(f[c_word], v);
  }
  table.coverage_note = path.filename().string() + ": " + std::to_string(table.size()) + " words";
  return table;
}

}  // namespace pred::manip
