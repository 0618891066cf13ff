#include "pred/stats/folds.hpp"

#include "pred/error.hpp"

namespace pred::stats {

std::vector<std::size_t> CVPlan::fold_sizes() const {
  std::vector<std::size_t> sizes(static_cast<std::size_t>(n_folds), 0);
  for (int f : row_fold) ++sizes[static_cast<std::size_t>(f)];
  return sizes;
}

std::vector<std::size_t> CVPlan::test_rows(int fold) const {
  std::vector<std::size_t> rows;
  for (std::size_t i = 0; i < row_fold.size(); ++i) {
    if (row_fold[i] == fold) rows.push_back(i);
  }
  return rows;
}

std::vector<std::size_t> CVPlan::train_rows(int fold) const {
  std::vector<std::size_t> rows;
  for (std::size_t i = 0; i < row_fold.size(); ++i) {
    if (row_fold[i] != fold) rows.push_back(i);
  }
  return rows;
}

CVPlan make_folds(const std::vector<RTObservation>& observations, int n_folds) {
  if (n_folds < 2) throw PlanError("need at least two folds");
  CVPlan plan;
  plan.n_folds = n_folds;
  for (const auto& obs : observations) {
    plan.fold_of_combination.emplace(
        Combination{obs.subject_id, obs.context.item_id, obs.context.sentence_id}, -1);
  }
  if (plan.fold_of_combination.size() < static_cast<std::size_t>(n_folds)) {
    throw PlanError("only " + std::to_string(plan.fold_of_combination.size()) +
                    " subject-by-sentence combinations for " + std::to_string(n_folds) +
                    " folds");
  }
  int i = 0;
  for (auto& [combo, fold] : plan.fold_of_combination) fold = i++ % n_folds;
  plan.row_fold.reserve(observations.size());
  for (const auto& obs : observations) {
    plan.row_fold.push_back(plan.fold_of_combination.at(
        Combination{obs.subject_id, obs.context.item_id, obs.context.sentence_id}));
  }
  return plan;
}

}  // namespace pred::stats
