#include "pred/lm/word_probability.hpp"

#include <cmath>

namespace pred::lm {

std::vector<TokenId> context_prefix(const StimulusCorpus& corpus, const ContextId& id,
                                    const Segmentation& segmentation, bool whole_item) {
  std::vector<TokenId> prefix;
  for (std::string_view w : corpus.preceding_words(id, whole_item)) {
    const auto ids = segmentation.segment(w);
    prefix.insert(prefix.end(), ids.begin(), ids.end());
  }
  return prefix;
}

double word_logprob(const DistributionProvider& provider, std::span<const TokenId> prefix,
                    std::string_view word, bool whitespace_correction) {
  const auto tokens = provider.segmentation().segment(word);
  std::vector<TokenId> context(prefix.begin(), prefix.end());
  double total = 0.0;
  for (TokenId t : tokens) {
    total += provider.next_distribution(context).logprob(t);
    context.push_back(t);
  }
  if (whitespace_correction) {
    total += std::log(masked_mass(provider.next_distribution(context), provider.vocab().boundary_mask()));
  }
  return total;
}

}  // namespace pred::lm
