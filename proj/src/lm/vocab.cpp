#include "pred/lm/vocab.hpp"

#include "pred/error.hpp"

namespace pred::lm {

namespace {

constexpr std::string_view kMarkers[] = {"\xC4\xA0" /* Ġ */, "\xC4\x8A" /* Ċ */,
                                         "\xE2\x96\x81" /* ▁ */};

std::size_t marker_length(std::string_view token) {
  if (token.empty()) return 0;
  if (token[0] == ' ' || token[0] == '\t' || token[0] == '\n' || token[0] == '\r') return 1;
  for (auto m : kMarkers) {
    if (token.starts_with(m)) return m.size();
  }
  return 0;
}

}  // namespace

std::u32string decode_utf8(std::string_view s) {
  std::u32string out;
  std::size_t i = 0;
  while (i < s.size()) {
    const auto c = static_cast<unsigned char>(s[i]);
    int len = c < 0x80 ? 1 : (c >> 5) == 6 ? 2 : (c >> 4) == 14 ? 3 : (c >> 3) == 30 ? 4 : 0;
    if (len == 0 || i + static_cast<std::size_t>(len) > s.size()) {
      out.push_back(U'�');
      ++i;
      continue;
    }
    char32_t cp = len == 1 ? c : c & (0x7F >> len);
    bool ok = true;
    for (int k = 1; k < len; ++k) {
      const auto cc = static_cast<unsigned char>(s[i + static_cast<std::size_t>(k)]);
      if ((cc & 0xC0) != 0x80) {
        ok = false;
        break;
      }
      cp = cp << 6 | (cc & 0x3F);
    }
    if (!ok) {
      out.push_back(U'�');
      ++i;
      continue;
    }
    out.push_back(cp);
    i += static_cast<std::size_t>(len);
  }
  return out;
}

bool is_word_end(std::string_view token) {
  if (token.empty()) return false;
  if (marker_length(token) > 0) return true;
  for (char32_t cp : decode_utf8(token)) {
    if (!is_punctuation(cp)) return false;
  }
  return true;
}

std::string strip_leading_marker(std::string_view token) {
  return std::string(token.substr(marker_length(token)));
}

TokenVocab::TokenVocab(std::vector<std::string> tokens, std::optional<std::string> eos)
    : tokens_(std::move(tokens)), eos_token_(std::move(eos)), marker_(" ") {
  index_.reserve(tokens_.size());
  boundary_.reserve(tokens_.size());
  for (std::size_t i = 0; i < tokens_.size(); ++i) {
    if (tokens_[i].empty()) throw IntegrityError("empty token at index " + std::to_string(i));
    if (!index_.emplace(tokens_[i], static_cast<TokenId>(i)).second) {
      throw IntegrityError("duplicate token '" + tokens_[i] + "'");
    }
    boundary_.push_back(is_word_end(tokens_[i]));
    if (tokens_[i].starts_with(kMarkers[0])) marker_ = std::string(kMarkers[0]);
  }
  if (eos_token_) {
    if (auto id = find(*eos_token_)) {
      eos_ = *id;
      boundary_[static_cast<std::size_t>(*id)] = true;
    }
  }
}

const std::string& TokenVocab::token(TokenId id) const {
  if (id < 0 || static_cast<std::size_t>(id) >= tokens_.size()) {
    throw DomainError("token id " + std::to_string(id) + " out of range");
  }
  return tokens_[static_cast<std::size_t>(id)];
}

std::optional<TokenId> TokenVocab::find(std::string_view token) const {
  auto it = index_.find(std::string(token));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::string TokenVocab::strip_marker(TokenId id) const { return strip_leading_marker(token(id)); }

Segmentation::Segmentation(std::shared_ptr<const TokenVocab> vocab,
                           std::map<std::string, std::vector<TokenId>> table)
    : vocab_(std::move(vocab)), table_(std::move(table)) {
  for (const auto& [word, ids] : table_) {
    if (ids.empty()) throw IntegrityError("empty segmentation for '" + word + "'");
    for (TokenId id : ids) vocab_->token(id);
  }
}

std::vector<TokenId> Segmentation::segment(std::string_view word) const {
  if (word.empty()) throw TokenizationError("cannot tokenize an empty word");
  if (auto it = table_.find(std::string(word)); it != table_.end()) return it->second;

  // Greedy longest match; the first piece carries the marker. Words that
  // only exist unmarked (punctuation such as ",") fall back to a bare match.
  const auto greedy = [&](std::string rest) -> std::optional<std::vector<TokenId>> {
    std::vector<TokenId> out;
    while (!rest.empty()) {
      std::optional<TokenId> best;
      for (std::size_t len = rest.size(); len > 0; --len) {
        if (auto id = vocab_->find(std::string_view(rest).substr(0, len))) {
          best = id;
          rest.erase(0, len);
          break;
        }
      }
      if (!best) return std::nullopt;
      out.push_back(*best);
    }
    return out;
  };
  if (auto marked = greedy(std::string(vocab_->marker()) + std::string(word))) return *marked;
  if (auto bare = greedy(std::string(word))) return *bare;
  throw TokenizationError("cannot tokenize '" + std::string(word) + "'");
}

std::string Segmentation::detokenize(std::span<const TokenId> ids) const {
  std::string out;
  for (TokenId id : ids) {
    const std::string& t = vocab_->token(id);
    const std::size_t m = marker_length(t);
    if (m > 0) out.push_back(' ');
    out.append(t, m, std::string::npos);
  }
  return out;
}

}  // namespace pred::lm
