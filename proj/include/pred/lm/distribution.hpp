#pragma once

#include <span>
#include <vector>

#include "pred/lm/vocab.hpp"

namespace pred::lm {

// Next-token log-probabilities in nats, one entry per vocabulary token.
struct TokenDistribution {
  std::vector<double> logprobs;

  std::size_t size() const { return logprobs.size(); }
  double logprob(TokenId id) const { return logprobs.at(static_cast<std::size_t>(id)); }
  double prob(TokenId id) const;
};

double logsumexp(std::span<const double> values);

// Log-probabilities from nonnegative weights. Throws DomainError when all
// weights are zero or any is negative or non-finite.
TokenDistribution from_weights(std::span<const double> weights);

// Total probability of tokens whose mask entry is set.
double masked_mass(const TokenDistribution& dist, const std::vector<bool>& mask);

}  // namespace pred::lm
