#pragma once

#include <string>
#include <vector>

#include "pred/stats/folds.hpp"
#include "pred/stats/lme.hpp"
#include "pred/stats/predictors.hpp"

namespace pred::stats {

// A model is the baseline plus `extra` predictor columns.
struct ModelSpec {
  std::string name;
  std::vector<std::string> extra;
};

struct CVOptions {
  HeldoutMode heldout = HeldoutMode::kConditional;
  bool standardize = true;
  LMEOptions lme;
  // The comparison aborts when more folds than this fail.
  int max_failed_folds = 2;
};

struct ModelFolds {
  std::string name;
  // Mean held-out per-observation log-likelihood gain over the baseline,
  // one entry per fold (NaN where the fold failed).
  std::vector<double> fold_gain;
  // Extra columns dropped because they were collinear with the rest of the
  // design in some training fold.
  std::vector<std::string> dropped;
};

struct CVResult {
  std::vector<ModelFolds> models;
  std::vector<bool> fold_failed;
  std::vector<std::string> notes;

  const ModelFolds& model(const std::string& name) const;
  int failed_folds() const;
  // Gains restricted to folds that did not fail.
  std::vector<double> usable_gains(const std::string& name) const;
};

// Fits the baseline and every model on each training fold and scores the
// held-out fold. Predictors are z-scored with training-fold statistics.
CVResult cross_validate(const PredictorTable& table, const std::vector<std::string>& baseline,
                        const std::vector<ModelSpec>& models, const CVPlan& plan,
                        const CVOptions& options = {});

struct PairedTest {
  std::string label;
  double p = 1.0;
  double p_adjusted = 1.0;
  double sem = 0.0;  // SEM of the per-fold gain differences
  // Mean over usable folds of second minus first.
  double mean_difference = 0.0;

  // The second model's gain over the first is significant: two-sided
  // p_adjusted below alpha and the difference in its favour.
  bool significant(double alpha) const { return p_adjusted < alpha && mean_difference > 0.0; }
};

PairedTest paired_test(const CVResult& cv, const std::string& first, const std::string& second,
                       int bonferroni_m);

struct ComparisonResult {
  std::string name_a;
  std::string name_b;
  std::string name_both;
  CVResult cv;
  PairedTest a_vs_both;
  PairedTest b_vs_both;
};

// Nested comparison of baseline+A, baseline+B and baseline+A+B. When B is
// collinear with A it is dropped from the joint model and noted.
ComparisonResult compare_models(const PredictorTable& table,
                                const std::vector<std::string>& baseline,
                                const std::string& predictor_a, const std::string& predictor_b,
                                const CVPlan& plan, int bonferroni_m = 1,
                                const CVOptions& options = {});

}  // namespace pred::stats
