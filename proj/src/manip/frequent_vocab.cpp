#include "pred/manip/frequent_vocab.hpp"

#include <cmath>

#include "pred/error.hpp"

namespace pred::manip {

FrequentVocab split_vocab(const lm::TokenVocab& vocab, const FrequencyTable& freq, double threshold) {
  if (!(threshold > 0.0)) throw DomainError("frequency threshold must be positive");
  FrequentVocab out;
  out.threshold = threshold;
  out.frequent.resize(vocab.size());
  for (std::size_t t = 0; t < vocab.size(); ++t) {
    // FrequencyTable lower-cases on lookup.
    const bool f = freq.per_billion(vocab.strip_marker(static_cast<lm::TokenId>(t))) >= threshold;
    out.frequent[t] = f;
    out.frequent_count += f ? 1 : 0;
  }
  if (out.frequent_count == 0) {
    throw DomainError("no token reaches the frequency threshold " + std::to_string(threshold));
  }
  return out;
}

double h3_token_probability(const lm::TokenDistribution& dist, const FrequentVocab& split,
                            lm::TokenId token) {
  if (dist.size() != split.frequent.size()) throw DomainError("distribution and vocabulary split sizes differ");
  const double f = static_cast<double>(split.frequent_count);
  if (!split.is_frequent(token)) return 1.0 / (f + 1.0);
  const double mass = lm::masked_mass(dist, split.frequent);
  return dist.prob(token) / mass * f / (f + 1.0);
}

double h3_logprob(const lm::DistributionProvider& provider, std::span<const lm::TokenId> prefix,
                  const FrequentVocab& split, std::string_view word) {
  const auto tokens = provider.segmentation().segment(word);
  std::vector<lm::TokenId> seq(prefix.begin(), prefix.end());
  double lp = 0.0;
  for (lm::TokenId t : tokens) {
    lp += std::log(h3_token_probability(provider.next_distribution(seq), split, t));
    seq.push_back(t);
  }
  return lp;
}

double h3_probability(const lm::DistributionProvider& provider,
                      std::span<const lm::TokenId> prefix, const FrequentVocab& split,
                      std::string_view word) {
  return std::exp(h3_logprob(provider, prefix, split, word));
}

}  // namespace pred::manip
