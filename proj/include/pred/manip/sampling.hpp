#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pred/corpus.hpp"
#include "pred/lm/provider.hpp"
#include "pred/random.hpp"

namespace pred::manip {

struct SampleSet {
  ContextId context;
  std::uint64_t seed = 0;
  std::vector<std::string> samples;

  std::size_t size() const { return samples.size(); }
  int count(std::string_view word) const;
};

// Draws one word by ancestral sampling: t0 always, then up to three more
// tokens until one marks a word end. If none of t1..t3 does, the word is
// t0 t1 t2. The leading marker is removed and the result normalized like
// cloze responses.
std::string sample_word(const lm::DistributionProvider& provider,
                        std::span<const lm::TokenId> prefix, Rng& rng);

// N independent draws. Throws DomainError when n < 1.
SampleSet sample_words(const lm::DistributionProvider& provider,
                       std::span<const lm::TokenId> prefix, const ContextId& context,
                       int n, std::uint64_t seed);

// (C_w + 1) / (N + S) with C_w counted among the samples.
double h1_probability(const SampleSet& samples, std::string_view word, int smoothing);

// JSON lines {"context":{"item":..,"sentence":..,"word_index":..},
//             "seed":..,"samples":[..]}
std::vector<SampleSet> read_sample_sets(const std::filesystem::path& path);
void write_sample_sets(const std::filesystem::path& path, const std::vector<SampleSet>& sets);

}  // namespace pred::manip
