#include "pred/lm/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pred/error.hpp"

namespace pred::lm {

double TokenDistribution::prob(TokenId id) const { return std::exp(logprob(id)); }

double logsumexp(std::span<const double> values) {
  double hi = -std::numeric_limits<double>::infinity();
  for (double v : values) hi = std::max(hi, v);
  if (!std::isfinite(hi)) return hi;
  double s = 0.0;
  for (double v : values) s += std::exp(v - hi);
  return hi + std::log(s);
}

TokenDistribution from_weights(std::span<const double> weights) {
  double total = 0.0;
  for (double w : weights) {
    if (!std::isfinite(w) || w < 0.0) throw DomainError("invalid distribution weight");
    total += w;
  }
  if (total <= 0.0) throw DomainError("distribution weights sum to zero");
  TokenDistribution d;
  d.logprobs.reserve(weights.size());
  for (double w : weights) d.logprobs.push_back(std::log(w / total));
  return d;
}

double masked_mass(const TokenDistribution& dist, const std::vector<bool>& mask) {
  double s = 0.0;
  for (std::size_t i = 0; i < dist.logprobs.size(); ++i) {
    if (mask[i]) s += std::exp(dist.logprobs[i]);
  }
  return s;
}

}  // namespace pred::lm
