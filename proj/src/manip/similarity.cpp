#include "pred/manip/similarity.hpp"

#include <algorithm>
#include <cmath>

#include "pred/corpus.hpp"
#include "pred/error.hpp"
#include "pred/lm/word_probability.hpp"

namespace pred::manip {

std::vector<double> word_embedding(const lm::EmbeddingMatrix& embeddings,
                                   const lm::Segmentation& segmentation, std::string_view word) {
  const auto tokens = segmentation.segment(word);
  std::vector<double> e(embeddings.dim(), 0.0);
  for (lm::TokenId t : tokens) {
    if (static_cast<std::size_t>(t) >= embeddings.rows()) {
      throw DomainError("embedding matrix has no row for token " + std::to_string(t));
    }
    const auto row = embeddings.row(static_cast<std::size_t>(t));
    for (std::size_t j = 0; j < e.size(); ++j) e[j] += row[j];
  }
  for (double& v : e) v /= static_cast<double>(tokens.size());
  return e;
}

double cosine(std::span<const double> a, std::span<const double> b) {
  double ab = 0.0, aa = 0.0, bb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ab += a[i] * b[i];
    aa += a[i] * a[i];
    bb += b[i] * b[i];
  }
  if (aa == 0.0 || bb == 0.0) return 0.0;
  return std::clamp(ab / std::sqrt(aa * bb), -1.0, 1.0);
}

double sa_probability(const std::map<std::string, int>& responses,
                      const lm::DistributionProvider& provider,
                      std::span<const lm::TokenId> prefix, const lm::EmbeddingMatrix& embeddings,
                      std::string_view word, const SimilarityConfig& config) {
  int total = 0;
  for (const auto& [w, c] : responses) {
    if (c < 1) throw DomainError("response counts must be positive");
    total += c;
  }
  if (total == 0) throw DomainError("similarity-adjusted probability needs at least one response");

  const auto& seg = provider.segmentation();
  const std::string target = normalize_response(word);
  const auto e_target = word_embedding(embeddings, seg, word);

  std::vector<double> dist;  // 1 - cos per distinct response
  for (const auto& [w, c] : responses) {
    dist.push_back(w == target ? 0.0 : 1.0 - cosine(e_target, word_embedding(embeddings, seg, w)));
  }
  const double d_max = *std::max_element(dist.begin(), dist.end());

  double sum = 0.0;
  std::size_t i = 0;
  for (const auto& [w, c] : responses) {
    const double d = dist[i++];
    double z = 1.0 - d / 2.0;
    if (config.similarity == SimilarityConfig::Similarity::kResponseNormalized) {
      z = d_max > 0.0 ? 1.0 - d / d_max : 1.0;
    }
    sum += c * z * lm::word_probability(provider, prefix, w, config.whitespace_correction);
  }
  return config.aggregation == SimilarityConfig::Aggregation::kMean ? sum / total : sum;
}

double sa_probability(const std::vector<std::string>& responses,
                      const lm::DistributionProvider& provider,
                      std::span<const lm::TokenId> prefix, const lm::EmbeddingMatrix& embeddings,
                      std::string_view word, const SimilarityConfig& config) {
  std::map<std::string, int> counts;
  for (const auto& r : responses) ++counts[normalize_response(r)];
  return sa_probability(counts, provider, prefix, embeddings, word, config);
}

}  // namespace pred::manip
