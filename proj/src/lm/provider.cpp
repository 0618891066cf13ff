#include "pred/lm/provider.hpp"

namespace pred::lm {

double DistributionProvider::score(std::span<const TokenId> prefix,
                                   std::span<const TokenId> continuation) const {
  std::vector<TokenId> context(prefix.begin(), prefix.end());
  double total = 0.0;
  for (TokenId t : continuation) {
    total += next_distribution(context).logprob(t);
    context.push_back(t);
  }
  return total;
}

}  // namespace pred::lm
