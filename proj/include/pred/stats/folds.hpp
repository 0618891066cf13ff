#pragma once

#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "pred/corpus.hpp"

namespace pred::stats {

// Subject-by-sentence combination; sentences are identified by
// (item_id, sentence_id).
struct Combination {
  std::string subject_id;
  std::string item_id;
  std::string sentence_id;

  auto operator<=>(const Combination&) const = default;
  bool operator==(const Combination&) const = default;
};

// Cross-validation partition. Combinations are sorted lexicographically and
// combination i goes to fold i mod n_folds, so a combination never straddles
// folds.
struct CVPlan {
  int n_folds = 0;
  std::map<Combination, int> fold_of_combination;
  std::vector<int> row_fold;  // aligned with the observations given to make_folds

  std::vector<std::size_t> fold_sizes() const;
  std::vector<std::size_t> test_rows(int fold) const;
  std::vector<std::size_t> train_rows(int fold) const;
};

// Throws PlanError when n_folds < 2 or there are fewer combinations than
// folds.
CVPlan make_folds(const std::vector<RTObservation>& observations, int n_folds = 10);

}  // namespace pred::stats
