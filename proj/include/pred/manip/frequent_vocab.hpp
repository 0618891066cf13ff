#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "pred/lm/provider.hpp"
#include "pred/manip/frequency.hpp"

namespace pred::manip {

// Split of the vocabulary into frequent tokens (V_F) and the rest. A token's
// frequency is looked up with its leading marker removed, lower-cased.
struct FrequentVocab {
  std::vector<bool> frequent;
  std::size_t frequent_count = 0;
  double threshold = 0.0;

  bool is_frequent(lm::TokenId t) const { return frequent.at(static_cast<std::size_t>(t)); }
};

// V_F = tokens with per_billion >= threshold. Throws DomainError when the
// threshold is not positive or V_F comes out empty.
FrequentVocab split_vocab(const lm::TokenVocab& vocab, const FrequencyTable& freq, double threshold);

// Frequent tokens keep their share of the V_F mass scaled by
// |V_F| / (|V_F| + 1); every other token gets 1 / (|V_F| + 1).
double h3_token_probability(const lm::TokenDistribution& dist, const FrequentVocab& split,
                            lm::TokenId token);

// Product of h3_token_probability over the word's tokens, each under its
// own conditional distribution. No whitespace correction.
double h3_logprob(const lm::DistributionProvider& provider, std::span<const lm::TokenId> prefix,
                  const FrequentVocab& split, std::string_view word);

double h3_probability(const lm::DistributionProvider& provider,
                      std::span<const lm::TokenId> prefix, const FrequentVocab& split,
                      std::string_view word);

}  // namespace pred::manip
