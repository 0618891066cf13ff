#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace pred::lm {

using TokenId = std::int32_t;

inline constexpr std::string_view kDefaultEos = "<|endoftext|>";

bool is_punctuation(char32_t cp);

// Decodes UTF-8; invalid sequences yield U+FFFD.
std::u32string decode_utf8(std::string_view s);

// True when the token starts with whitespace or a whitespace marker
// ("Ġ", "Ċ", "▁"), or when every code point is punctuation.
bool is_word_end(std::string_view token);

// Ordered token list with an index <-> token bijection.
class TokenVocab {
 public:
  // Throws IntegrityError on duplicate or empty tokens.
  explicit TokenVocab(std::vector<std::string> tokens,
                      std::optional<std::string> eos = std::string(kDefaultEos));

  std::size_t size() const { return tokens_.size(); }
  const std::string& token(TokenId id) const;
  std::optional<TokenId> find(std::string_view token) const;
  const std::vector<std::string>& tokens() const { return tokens_; }
  std::optional<TokenId> eos() const { return eos_; }
  const std::optional<std::string>& eos_token() const { return eos_token_; }

  // is_word_end per token, with the end-of-text token always included.
  const std::vector<bool>& boundary_mask() const { return boundary_; }
  bool is_boundary(TokenId id) const { return boundary_.at(static_cast<std::size_t>(id)); }

  // "Ġ" when the vocabulary uses byte-level markers, otherwise " ".
  std::string_view marker() const { return marker_; }

  // Token text with its leading marker removed.
  std::string strip_marker(TokenId id) const;

 private:
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, TokenId> index_;
  std::optional<std::string> eos_token_;
  std::optional<TokenId> eos_;
  std::vector<bool> boundary_;
  std::string marker_;
};

std::string strip_leading_marker(std::string_view token);

// Word -> token segmentation. Words listed in the table use the stored
// segmentation; others fall back to greedy longest-match on marker + word.
// Segmentations describe the word as it appears after a space; a word with
// no marked segmentation (e.g. ",") is matched without the marker.
class Segmentation {
 public:
  Segmentation() = default;
  Segmentation(std::shared_ptr<const TokenVocab> vocab,
               std::map<std::string, std::vector<TokenId>> table);

  const TokenVocab& vocab() const { return *vocab_; }
  std::shared_ptr<const TokenVocab> vocab_ptr() const { return vocab_; }
  const std::map<std::string, std::vector<TokenId>>& table() const { return table_; }

  // Throws TokenizationError when no segmentation exists.
  std::vector<TokenId> segment(std::string_view word) const;
  // Concatenates token texts with markers turned into spaces.
  std::string detokenize(std::span<const TokenId> ids) const;

 private:
  std::shared_ptr<const TokenVocab> vocab_;
  std::map<std::string, std::vector<TokenId>> table_;
};

}  // namespace pred::lm
