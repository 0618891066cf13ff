#pragma once

#include <span>
#include <vector>

#include "pred/lm/distribution.hpp"
#include "pred/lm/vocab.hpp"

namespace pred::lm {

// Source of next-token distributions. Implementations must be deterministic
// and safe for concurrent const use.
class DistributionProvider {
 public:
  virtual ~DistributionProvider() = default;

  virtual const Segmentation& segmentation() const = 0;
  const TokenVocab& vocab() const { return segmentation().vocab(); }

  virtual TokenDistribution next_distribution(std::span<const TokenId> prefix) const = 0;

  // log P(continuation | prefix) in nats, by the chain rule.
  virtual double score(std::span<const TokenId> prefix,
                       std::span<const TokenId> continuation) const;
};

}  // namespace pred::lm
