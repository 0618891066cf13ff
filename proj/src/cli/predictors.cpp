#include "pred/cli/predictors.hpp"

#include <cmath>

#include "pred/cli/config.hpp"
#include "pred/error.hpp"
#include "pred/lm/word_probability.hpp"

namespace pred::cli {

ContextValues cloze_probabilities(const ClozeResponseSet& cloze, const StimulusCorpus& corpus,
                                  const std::vector<ContextId>& contexts, int smoothing) {
  ContextValues out;
  for (const auto& c : contexts) {
    out.emplace(c, cloze::cloze_probability(cloze, c, corpus.word(c).text, smoothing));
  }
  return out;
}

ContextValues lm_logprobs(const lm::DistributionProvider& provider, const StimulusCorpus& corpus,
                          const std::vector<ContextId>& contexts, bool whole_item,
                          bool whitespace_correction) {
  ContextValues out;
  for (const auto& c : contexts) {
    const auto prefix = lm::context_prefix(corpus, c, provider.segmentation(), whole_item);
    out.emplace(c, lm::word_logprob(provider, prefix, corpus.word(c).text, whitespace_correction));
  }
  return out;
}

std::vector<manip::SampleSet> h1_samples(const lm::DistributionProvider* provider,
                                         const StimulusCorpus& corpus, const ClozeResponseSet& cloze,
                                         const std::vector<ContextId>& contexts, bool whole_item,
                                         std::uint64_t seed,
                                         const std::vector<manip::SampleSet>& stored) {
  std::map<ContextId, const manip::SampleSet*> by_context;
  for (const auto& s : stored) by_context.emplace(s.context, &s);

  std::vector<manip::SampleSet> out;
  for (const auto& c : contexts) {
    const int n = cloze.total(c);
    if (auto it = by_context.find(c); it != by_context.end()) {
      if (static_cast<int>(it->second->size()) != n) {
        throw IntegrityError("stored samples for " + to_string(c) + " do not match the cloze count");
      }
      out.push_back(*it->second);
      continue;
    }
    if (!provider) throw CoverageError("no stored samples for " + to_string(c));
    const auto prefix = lm::context_prefix(corpus, c, provider->segmentation(), whole_item);
    out.push_back(manip::sample_words(*provider, prefix, c, n, fnv1a(to_string(c), seed ^ 0x9e3779b97f4a7c15ull)));
  }
  return out;
}

ContextValues h1_probabilities(const std::vector<manip::SampleSet>& samples,
                               const StimulusCorpus& corpus, int smoothing) {
  ContextValues out;
  for (const auto& s : samples) {
    out.emplace(s.context, manip::h1_probability(s, corpus.word(s.context).text, smoothing));
  }
  return out;
}

ContextValues h2_logprobs(const lm::DistributionProvider& provider, const StimulusCorpus& corpus,
                          const std::vector<ContextId>& contexts, bool whole_item,
                          const manip::ClusterAssignment& clusters) {
  ContextValues out;
  for (const auto& c : contexts) {
    const auto prefix = lm::context_prefix(corpus, c, provider.segmentation(), whole_item);
    out.emplace(c, manip::h2_logprob(provider, prefix, clusters, corpus.word(c).text));
  }
  return out;
}

ContextValues h3_logprobs(const lm::DistributionProvider& provider, const StimulusCorpus& corpus,
                          const std::vector<ContextId>& contexts, bool whole_item,
                          const manip::FrequentVocab& split) {
  ContextValues out;
  for (const auto& c : contexts) {
    const auto prefix = lm::context_prefix(corpus, c, provider.segmentation(), whole_item);
    out.emplace(c, manip::h3_logprob(provider, prefix, split, corpus.word(c).text));
  }
  return out;
}

ContextValues sa_probabilities(const lm::DistributionProvider& provider,
                               const StimulusCorpus& corpus, const std::vector<ContextId>& contexts,
                               bool whole_item, const lm::EmbeddingMatrix& embeddings,
                               const std::map<ContextId, std::map<std::string, int>>& responses,
                               const manip::SimilarityConfig& config) {
  ContextValues out;
  for (const auto& c : contexts) {
    auto it = responses.find(c);
    if (it == responses.end()) throw CoverageError("no response set for " + to_string(c));
    const auto prefix = lm::context_prefix(corpus, c, provider.segmentation(), whole_item);
    out.emplace(c, manip::sa_probability(it->second, provider, prefix, embeddings, corpus.word(c).text, config));
  }
  return out;
}

std::vector<double> column_for(const std::vector<RTObservation>& observations,
                               const ContextValues& values) {
  std::vector<double> col;
  col.reserve(observations.size());
  for (const auto& o : observations) {
    auto it = values.find(o.context);
    if (it == values.end()) throw CoverageError("no predictor value for " + to_string(o.context));
    col.push_back(it->second);
  }
  return col;
}

}  // namespace pred::cli
