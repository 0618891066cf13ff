#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <vector>

#include "pred/lm/provider.hpp"

namespace pred::lm {

inline constexpr std::size_t kToyVocabLimit = 64;

// Deterministic n-gram test double. The distribution after a prefix depends
// only on its last (order - 1) tokens, left-padded with -1 (start of text).
// Lookup order: an explicit row for that context, then a row generated from
// (seed, context) when seeded, then the fallback row (uniform by default).
class ToyProvider final : public DistributionProvider {
 public:
  struct Options {
    int order = 2;
    std::optional<std::uint64_t> seed;
    // Spread of the random logits; larger values give peakier rows.
    double concentration = 1.0;
    // Explicit rows as probabilities; each must sum to 1 within 1e-9.
    std::map<std::vector<TokenId>, std::vector<double>> rows;
    std::vector<double> fallback;
  };

  // Throws DomainError for vocabularies above kToyVocabLimit, order < 1,
  // or malformed rows.
  ToyProvider(Segmentation segmentation, Options options);

  const Segmentation& segmentation() const override { return segmentation_; }
  TokenDistribution next_distribution(std::span<const TokenId> prefix) const override;

  int order() const { return options_.order; }

 private:
  std::vector<TokenId> context_key(std::span<const TokenId> prefix) const;

  Segmentation segmentation_;
  Options options_;
  std::map<std::vector<TokenId>, TokenDistribution> rows_;
  TokenDistribution fallback_;
};

ToyProvider uniform_toy_provider(Segmentation segmentation);
ToyProvider seeded_toy_provider(Segmentation segmentation, std::uint64_t seed, int order = 2,
                                double concentration = 1.0);

// JSON description:
//   {"vocab":[..], "eos":"<|endoftext|>", "segmentation":{"word":[ids]},
//    "order":2, "seed":7, "concentration":1.5,
//    "rows":[{"context":[ids], "probs":[..]}]}
// "seed", "rows" and "eos" are optional.
std::unique_ptr<ToyProvider> load_toy_model(const std::filesystem::path& path);

}  // namespace pred::lm
