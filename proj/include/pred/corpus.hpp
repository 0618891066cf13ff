#pragma once

#include <compare>
#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace pred {

// Addresses one word of the stimulus corpus: the word being predicted and,
// implicitly, every word before it in its sentence.
struct ContextId {
  std::string item_id;
  std::string sentence_id;
  int word_index = 0;

  auto operator<=>(const ContextId&) const = default;
  bool operator==(const ContextId&) const = default;
};

std::string to_string(const ContextId& id);

struct WordToken {
  int word_index = 0;
  std::string text;
  std::optional<std::string> line_id;
};

struct Sentence {
  std::string sentence_id;
  std::vector<WordToken> words;
};

struct Item {
  std::string item_id;
  std::vector<Sentence> sentences;
};

// Line-edge information for a word, computed per item in reading order.
struct WordPlacement {
  std::size_t item = 0;
  std::size_t sentence = 0;
  std::size_t word = 0;
  bool sentence_first = false;
  bool sentence_last = false;
  bool line_first = false;
  bool line_last = false;
};

class StimulusCorpus {
 public:
  StimulusCorpus() = default;
  // Validates invariants (contiguous indices, unique triples, non-empty
  // text) and builds the lookup index. Throws IntegrityError.
  explicit StimulusCorpus(std::vector<Item> items);

  const std::vector<Item>& items() const { return items_; }
  std::size_t word_count() const { return placements_.size(); }
  std::size_t sentence_count() const;

  bool contains(const ContextId& id) const;
  // Throws ReferenceError when the id does not resolve.
  const WordToken& word(const ContextId& id) const;
  const Sentence& sentence_of(const ContextId& id) const;
  const Item& item_of(const ContextId& id) const;
  const WordPlacement& placement(const ContextId& id) const;

  // Words preceding `id` within its sentence, or within its whole item when
  // `whole_item` is set (paragraph-level contexts).
  std::vector<std::string_view> preceding_words(const ContextId& id,
                                                bool whole_item = false) const;

  // Every context in corpus order.
  std::vector<ContextId> contexts() const;

 private:
  std::vector<Item> items_;
  std::map<ContextId, WordPlacement> placements_;
};

// Cloze completions per context. Responses are stored normalized.
class ClozeResponseSet {
 public:
  // Normalizes each response, then stores them. Throws IntegrityError when
  // `responses` is empty.
  void add(const ContextId& id, const std::vector<std::string>& responses);

  bool has(const ContextId& id) const { return counts_.contains(id); }
  // Multiset as word -> count. Throws MissingContextError.
  const std::map<std::string, int>& counts(const ContextId& id) const;
  // Expanded multiset in sorted order.
  std::vector<std::string> responses(const ContextId& id) const;
  int total(const ContextId& id) const;
  int count(const ContextId& id, std::string_view word) const;

  std::size_t size() const { return counts_.size(); }
  std::vector<ContextId> contexts() const;

  // False when any record was declared as aggregated rather than the raw
  // per-participant completions.
  bool has_raw_responses() const { return raw_; }
  void mark_not_raw() { raw_ = false; }

 private:
  std::map<ContextId, std::map<std::string, int>> counts_;
  std::map<ContextId, int> totals_;
  bool raw_ = true;
};

// Lower-case (ASCII), trim, keep the first whitespace-separated token.
std::string normalize_response(std::string_view raw);

enum class Measure { kSPR, kFP, kGP };

std::string_view to_string(Measure m);
// Accepts "SPR", "FP", "GP" in any case. Throws ParseError.
Measure parse_measure(std::string_view s);

struct RTObservation {
  std::string subject_id;
  ContextId context;
  Measure measure = Measure::kSPR;
  double rt = 0.0;  // milliseconds
  std::optional<bool> prev_word_fixated;
  std::optional<bool> trial_correct;
};

struct FilterConfig {
  double spr_max_ms = 3000.0;
  double gp_max_ms = 3000.0;
  double fp_max_ms = 2000.0;
  bool drop_sentence_edges = true;
  bool drop_line_edges = true;
  bool drop_incorrect_trials = true;
};

// Stimuli CSV: item_id,sentence_id,word_index,word_text[,line_id].
StimulusCorpus load_stimuli(const std::filesystem::path& path);

// One JSON record per line:
//   {"item_id":..,"sentence_id":..,"word_index":..,"responses":[..]}
// An optional "raw": false marks aggregated (non-raw) response lists.
ClozeResponseSet load_cloze_responses(const std::filesystem::path& path,
                                      const StimulusCorpus& corpus);

// RT CSV: subject_id,item_id,sentence_id,word_index,measure,rt_ms
//         [,prev_fixated][,correct]
std::vector<RTObservation> load_rt_data(const std::filesystem::path& path,
                                        const StimulusCorpus& corpus,
                                        Measure measure);

std::vector<RTObservation> filter_rt(const std::vector<RTObservation>& observations,
                                     const StimulusCorpus& corpus,
                                     const FilterConfig& config = {});

}  // namespace pred
