#include <algorithm>
#include <charconv>
#include <unordered_map>

#include "pred/corpus.hpp"
#include "pred/csv.hpp"
#include "pred/error.hpp"

namespace pred {

std::string to_string(const ContextId& id) {
  return id.item_id + "/" + id.sentence_id + "/" + std::to_string(id.word_index);
}

StimulusCorpus::StimulusCorpus(std::vector<Item> items) : items_(std::move(items)) {
  for (std::size_t i = 0; i < items_.size(); ++i) {
    const Item& item = items_[i];
    // line_id -> (first, last) reading-order position within the item
    std::unordered_map<std::string, std::pair<ContextId, ContextId>> lines;
    for (std::size_t s = 0; s < item.sentences.size(); ++s) {
      const Sentence& sent = item.sentences[s];
      if (sent.words.empty()) {
        throw IntegrityError("sentence " + item.item_id + "/" + sent.sentence_id +
                             " has no words");
      }
      for (std::size_t w = 0; w < sent.words.size(); ++w) {
        const WordToken& tok = sent.words[w];
        ContextId id{item.item_id, sent.sentence_id, tok.word_index};
        if (tok.word_index != static_cast<int>(w)) {
          throw IntegrityError("word_index values of " + item.item_id + "/" +
                               sent.sentence_id + " are not contiguous from 0");
        }
        if (tok.text.empty()) throw IntegrityError("empty word text at " + to_string(id));
        WordPlacement p{i, s, w, w == 0, w + 1 == sent.words.size(), false, false};
        if (!placements_.emplace(id, p).second) {
          throw IntegrityError("duplicate context " + to_string(id));
        }
        if (tok.line_id) {
          auto [it, fresh] = lines.try_emplace(*tok.line_id, id, id);
          if (!fresh) it->second.second = id;
        }
      }
    }
    for (const auto& [line, span] : lines) {
      placements_.at(span.first).line_first = true;
      placements_.at(span.second).line_last = true;
    }
  }
}

std::size_t StimulusCorpus::sentence_count() const {
  std::size_t n = 0;
  for (const auto& item : items_) n += item.sentences.size();
  return n;
}

bool StimulusCorpus::contains(const ContextId& id) const {
  return placements_.contains(id);
}

const WordPlacement& StimulusCorpus::placement(const ContextId& id) const {
  auto it = placements_.find(id);
  if (it == placements_.end()) throw ReferenceError("unknown context " + to_string(id));
  return it->second;
}

const WordToken& StimulusCorpus::word(const ContextId& id) const {
  const auto& p = placement(id);
  return items_[p.item].sentences[p.sentence].words[p.word];
}

const Sentence& StimulusCorpus::sentence_of(const ContextId& id) const {
  const auto& p = placement(id);
  return items_[p.item].sentences[p.sentence];
}

const Item& StimulusCorpus::item_of(const ContextId& id) const {
  return items_[placement(id).item];
}

std::vector<std::string_view> StimulusCorpus::preceding_words(const ContextId& id,
                                                              bool whole_item) const {
  const auto& p = placement(id);
  const Item& item = items_[p.item];
  std::vector<std::string_view> out;
  if (whole_item) {
    for (std::size_t s = 0; s < p.sentence; ++s) {
      for (const auto& w : item.sentences[s].words) out.push_back(w.text);
    }
  }
  const auto& words = item.sentences[p.sentence].words;
  for (std::size_t w = 0; w < p.word; ++w) out.push_back(words[w].text);
  return out;
}

std::vector<ContextId> StimulusCorpus::contexts() const {
  std::vector<ContextId> out;
  out.reserve(placements_.size());
  for (const auto& item : items_) {
    for (const auto& sent : item.sentences) {
      for (const auto& w : sent.words) {
        out.push_back({item.item_id, sent.sentence_id, w.word_index});
      }
    }
  }
  return out;
}

namespace {

int parse_index(const std::string& s, std::size_t line_no) {
  int value = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size() || value < 0) {
    throw ParseError("invalid word_index '" + s + "'", line_no);
  }
  return value;
}

}  // namespace

StimulusCorpus load_stimuli(const std::filesystem::path& path) {
  const csv::Table table = csv::read_file(path, /*allow_short_rows=*/true);
  const int c_item = table.column("item_id");
  const int c_sent = table.column("sentence_id");
  const int c_index = table.column("word_index");
  const int c_text = table.column("word_text");
  const int c_line = table.column("line_id");
  if (c_item < 0 || c_sent < 0 || c_index < 0 || c_text < 0) {
    throw ParseError("stimuli header must contain item_id,sentence_id,word_index,word_text", 1);
  }

  std::vector<Item> items;
  std::unordered_map<std::string, std::size_t> item_pos;
  std::unordered_map<std::string, std::size_t> sent_pos;  // key item\0sentence

  for (const auto& [line_no, f] : table.rows) {
    const int required = std::max({c_item, c_sent, c_index, c_text});
    if (static_cast<int>(f.size()) <= required) {
      throw ParseError("too few fields", line_no);
    }
    const std::string& item_id = f[c_item];
    const std::string& sent_id = f[c_sent];
    if (item_id.empty() || sent_id.empty()) throw ParseError("empty identifier", line_no);
    WordToken tok;
    tok.word_index = parse_index(f[c_index], line_no);
    tok.text = f[c_text];
    if (tok.text.empty()) throw ParseError("empty word_text", line_no);
    if (c_line >= 0 && c_line < static_cast<int>(f.size()) && !f[c_line].empty()) {
      tok.line_id = f[c_line];
    }

    auto [iit, new_item] = item_pos.try_emplace(item_id, items.size());
    if (new_item) items.push_back(Item{item_id, {}});
    Item& item = items[iit->second];
    auto [sit, new_sent] = sent_pos.try_emplace(item_id + '\0' + sent_id, item.sentences.size());
    if (new_sent) item.sentences.push_back(Sentence{sent_id, {}});
    item.sentences[sit->second].words.push_back(std::move(tok));
  }

  for (auto& item : items) {
    for (auto& sent : item.sentences) {
      std::stable_sort(sent.words.begin(), sent.words.end(),
                       [](const WordToken& a, const WordToken& b) {
                         return a.word_index < b.word_index;
                       });
      for (std::size_t w = 1; w < sent.words.size(); ++w) {
        if (sent.words[w].word_index == sent.words[w - 1].word_index) {
          throw IntegrityError("duplicate context " + item.item_id + "/" + sent.sentence_id +
                               "/" + std::to_string(sent.words[w].word_index));
        }
      }
    }
  }
  return StimulusCorpus(std::move(items));
}

}  // namespace pred
