#pragma once

#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pred/lm/embedding.hpp"
#include "pred/lm/provider.hpp"

namespace pred::manip {

struct SimilarityConfig {
  enum class Similarity {
    kCosine,              // (1 + cos) / 2
    kResponseNormalized,  // 1 - d / max d over the responses, d = 1 - cos
  };
  enum class Aggregation { kMean, kSum };

  Similarity similarity = Similarity::kCosine;
  Aggregation aggregation = Aggregation::kMean;
  bool whitespace_correction = true;
};

// Mean of the embedding rows of the word's tokens.
std::vector<double> word_embedding(const lm::EmbeddingMatrix& embeddings,
                                   const lm::Segmentation& segmentation, std::string_view word);

// Cosine similarity; 0 when either vector is all zeros.
double cosine(std::span<const double> a, std::span<const double> b);

// Similarity-weighted response probability:
//   sum over responses w' of z(word, w') * P(w' | prefix)
// divided by |R| under mean aggregation. Responses are given as a
// word -> count multiset. Throws DomainError when it is empty.
double sa_probability(const std::map<std::string, int>& responses,
                      const lm::DistributionProvider& provider,
                      std::span<const lm::TokenId> prefix, const lm::EmbeddingMatrix& embeddings,
                      std::string_view word, const SimilarityConfig& config = {});

double sa_probability(const std::vector<std::string>& responses,
                      const lm::DistributionProvider& provider,
                      std::span<const lm::TokenId> prefix, const lm::EmbeddingMatrix& embeddings,
                      std::string_view word, const SimilarityConfig& config = {});

}  // namespace pred::manip
