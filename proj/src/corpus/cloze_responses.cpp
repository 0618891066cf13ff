#include <cctype>
#include <fstream>

#include <nlohmann/json.hpp>

#include "pred/corpus.hpp"
#include "pred/error.hpp"

namespace pred {

std::string normalize_response(std::string_view raw) {
  auto is_space = [](char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; };
  std::size_t b = 0;
  while (b < raw.size() && is_space(raw[b])) ++b;
  std::size_t e = b;
  while (e < raw.size() && !is_space(raw[e])) ++e;
  std::string out(raw.substr(b, e - b));
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

void ClozeResponseSet::add(const ContextId& id, const std::vector<std::string>& responses) {
  if (responses.empty()) throw IntegrityError("empty response list for " + to_string(id));
  auto& counts = counts_[id];
  int& total = totals_[id];
  for (const auto& r : responses) {
    std::string w = normalize_response(r);
    if (w.empty()) throw IntegrityError("blank response for " + to_string(id));
    ++counts[w];
    ++total;
  }
}

const std::map<std::string, int>& ClozeResponseSet::counts(const ContextId& id) const {
  auto it = counts_.find(id);
  if (it == counts_.end()) throw MissingContextError("no responses for " + to_string(id));
  return it->second;
}

std::vector<std::string> ClozeResponseSet::responses(const ContextId& id) const {
  std::vector<std::string> out;
  for (const auto& [w, c] : counts(id)) out.insert(out.end(), c, w);
  return out;
}

int ClozeResponseSet::total(const ContextId& id) const {
  auto it = totals_.find(id);
  if (it == totals_.end()) throw MissingContextError("no responses for " + to_string(id));
  return it->second;
}

int ClozeResponseSet::count(const ContextId& id, std::string_view word) const {
  const auto& c = counts(id);
  auto it = c.find(normalize_response(word));
  return it == c.end() ? 0 : it->second;
}

std::vector<ContextId> ClozeResponseSet::contexts() const {
  std::vector<ContextId> out;
  out.reserve(counts_.size());
  for (const auto& [id, _] : counts_) out.push_back(id);
  return out;
}

ClozeResponseSet load_cloze_responses(const std::filesystem::path& path,
                                      const StimulusCorpus& corpus) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  ClozeResponseSet set;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    nlohmann::json rec;
    try {
      rec = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(std::string("invalid JSON: ") + e.what(), line_no);
    }
    ContextId id;
    std::vector<std::string> responses;
    try {
      id.item_id = rec.at("item_id").get<std::string>();
      id.sentence_id = rec.at("sentence_id").get<std::string>();
      id.word_index = rec.at("word_index").get<int>();
      responses = rec.at("responses").get<std::vector<std::string>>();
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(std::string("malformed cloze record: ") + e.what(), line_no);
    }
    if (!corpus.contains(id)) {
      throw ReferenceError("cloze record references unknown context " + to_string(id) +
                           " (line " + std::to_string(line_no) + ")");
    }
    if (set.has(id)) {
      throw IntegrityError("duplicate cloze record for " + to_string(id) + " (line " +
                           std::to_string(line_no) + ")");
    }
    if (responses.empty()) {
      throw IntegrityError("empty response list for " + to_string(id) + " (line " +
                           std::to_string(line_no) + ")");
    }
    set.add(id, responses);
    if (rec.contains("raw") && rec["raw"].is_boolean() && !rec["raw"].get<bool>()) {
      set.mark_not_raw();
    }
  }
  return set;
}

}  // namespace pred
