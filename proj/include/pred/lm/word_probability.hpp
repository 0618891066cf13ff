#pragma once

#include <cmath>
#include <span>
#include <string_view>
#include <vector>

#include "pred/corpus.hpp"
#include "pred/lm/provider.hpp"

namespace pred::lm {

// Token prefix for a corpus context: the segmentations of the preceding
// words of the sentence (or of the whole item).
std::vector<TokenId> context_prefix(const StimulusCorpus& corpus, const ContextId& id,
                                    const Segmentation& segmentation, bool whole_item = false);

// log P(word | prefix) in nats: the chain-rule product over the word's
// tokens, times (when `whitespace_correction` is set) the total probability
// of a word-boundary token immediately after the word.
double word_logprob(const DistributionProvider& provider, std::span<const TokenId> prefix,
                    std::string_view word, bool whitespace_correction = true);

inline double word_probability(const DistributionProvider& provider,
                               std::span<const TokenId> prefix, std::string_view word,
                               bool whitespace_correction = true) {
  return std::exp(word_logprob(provider, prefix, word, whitespace_correction));
}

}  // namespace pred::lm
