#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "pred/cloze.hpp"
#include "pred/corpus.hpp"
#include "pred/lm/embedding.hpp"
#include "pred/lm/provider.hpp"
#include "pred/manip/frequent_vocab.hpp"
#include "pred/manip/kmeans.hpp"
#include "pred/manip/sampling.hpp"
#include "pred/manip/similarity.hpp"

namespace pred::cli {

// One value per context (probabilities, or log-probabilities in nats).
using ContextValues = std::map<ContextId, double>;

inline double bits(double logp_nats) { return -logp_nats / 0.6931471805599453; }

ContextValues cloze_probabilities(const ClozeResponseSet& cloze, const StimulusCorpus& corpus,
                                  const std::vector<ContextId>& contexts, int smoothing);

// Corrected (or plain) word log-probabilities under the provider.
ContextValues lm_logprobs(const lm::DistributionProvider& provider, const StimulusCorpus& corpus,
                          const std::vector<ContextId>& contexts, bool whole_item,
                          bool whitespace_correction = true);

// Samples N words per context (N = the context's cloze response count)
// unless `stored` already holds a set for it.
std::vector<manip::SampleSet> h1_samples(const lm::DistributionProvider* provider,
                                         const StimulusCorpus& corpus, const ClozeResponseSet& cloze,
                                         const std::vector<ContextId>& contexts, bool whole_item,
                                         std::uint64_t seed,
                                         const std::vector<manip::SampleSet>& stored = {});

ContextValues h1_probabilities(const std::vector<manip::SampleSet>& samples,
                               const StimulusCorpus& corpus, int smoothing);

ContextValues h2_logprobs(const lm::DistributionProvider& provider, const StimulusCorpus& corpus,
                          const std::vector<ContextId>& contexts, bool whole_item,
                          const manip::ClusterAssignment& clusters);

ContextValues h3_logprobs(const lm::DistributionProvider& provider, const StimulusCorpus& corpus,
                          const std::vector<ContextId>& contexts, bool whole_item,
                          const manip::FrequentVocab& split);

// Similarity-adjusted probability with responses supplied per context.
ContextValues sa_probabilities(const lm::DistributionProvider& provider,
                               const StimulusCorpus& corpus, const std::vector<ContextId>& contexts,
                               bool whole_item, const lm::EmbeddingMatrix& embeddings,
                               const std::map<ContextId, std::map<std::string, int>>& responses,
                               const manip::SimilarityConfig& config);

// Applies f to every value.
template <typename F>
ContextValues map_values(const ContextValues& in, F f) {
  ContextValues out;
  for (const auto& [k, v] : in) out.emplace(k, f(v));
  return out;
}

// Column aligned with the observations. Throws CoverageError for a context
// without a value.
std::vector<double> column_for(const std::vector<RTObservation>& observations,
                               const ContextValues& values);

}  // namespace pred::cli
