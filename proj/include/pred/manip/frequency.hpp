#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_map>

namespace pred::manip {

// Word frequencies in occurrences per billion words. Keys are lower-cased.
class FrequencyTable {
 public:
  // Throws DomainError for negative or non-finite values.
  void set(std::string_view word, double per_billion);
  // 0 for absent words.
  double per_billion(std::string_view word) const;
  bool contains(std::string_view word) const;
  std::size_t size() const { return table_.size(); }

  std::string coverage_note;

 private:
  std::unordered_map<std::string, double> table_;
};

// CSV with header word,per_billion.
FrequencyTable load_frequency_table(const std::filesystem::path& path);

}  // namespace pred::manip
