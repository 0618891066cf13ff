#include "pred/stats/compare.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include <fmt/format.h>

#include "pred/error.hpp"
#include "pred/stats/permutation.hpp"

namespace pred::stats {

const ModelFolds& CVResult::model(const std::string& name) const {
  for (const auto& m : models) {
    if (m.name == name) return m;
  }
  throw DomainError("no model named '" + name + "'");
}

int CVResult::failed_folds() const {
  return static_cast<int>(std::count(fold_failed.begin(), fold_failed.end(), true));
}

std::vector<double> CVResult::usable_gains(const std::string& name) const {
  const auto& m = model(name);
  std::vector<double> out;
  for (std::size_t f = 0; f < m.fold_gain.size(); ++f) {
    if (!fold_failed[f]) out.push_back(m.fold_gain[f]);
  }
  return out;
}

namespace {

Standardizer select(const Standardizer& all, const std::vector<std::string>& all_names,
                    const std::vector<std::string>& cols) {
  Standardizer z;
  for (const auto& c : cols) {
    auto pos = static_cast<std::size_t>(
        std::find(all_names.begin(), all_names.end(), c) - all_names.begin());
    z.mean.push_back(all.mean[pos]);
    z.scale.push_back(all.scale[pos]);
  }
  return z;
}

// Keeps columns in order, skipping any that would make [1 | kept] rank
// deficient on the training rows.
std::vector<std::string> independent_columns(const PredictorTable& table,
                                             const std::vector<std::string>& wanted,
                                             std::span<const std::size_t> rows,
                                             const Standardizer* z_all,
                                             const std::vector<std::string>& z_names,
                                             double tol, std::vector<std::string>& dropped) {
  std::vector<std::string> kept;
  for (const auto& col : wanted) {
    std::vector<std::string> trial = kept;
    trial.push_back(col);
    Standardizer z;
    if (z_all) z = select(*z_all, z_names, trial);
    const Eigen::MatrixXd X = design_matrix(table, trial, rows, z_all ? &z : nullptr);
    if (design_rank(X, tol) == X.cols()) {
      kept = std::move(trial);
    } else {
      dropped.push_back(col);
    }
  }
  return kept;
}

}  // namespace

CVResult cross_validate(const PredictorTable& table, const std::vector<std::string>& baseline,
                        const std::vector<ModelSpec>& models, const CVPlan& plan,
                        const CVOptions& options) {
  if (plan.row_fold.size() != table.rows()) {
    throw DomainError("fold plan does not match the predictor table");
  }
  std::vector<std::string> all_names = baseline;
  for (const auto& m : models) {
    for (const auto& c : m.extra) {
      if (std::find(all_names.begin(), all_names.end(), c) == all_names.end()) {
        all_names.push_back(c);
      }
    }
  }
  for (const auto& c : all_names) {
    if (!table.has_column(c)) throw DomainError("predictor '" + c + "' is not in the table");
  }

  const auto n_folds = static_cast<std::size_t>(plan.n_folds);
  CVResult result;
  result.fold_failed.assign(n_folds, false);
  for (const auto& m : models) {
    result.models.push_back({m.name, std::vector<double>(n_folds, std::numeric_limits<double>::quiet_NaN()), {}});
  }
  std::vector<std::set<std::string>> dropped(models.size());
  const auto& y_all = table.response();
  const auto& g_all = table.groups();

  for (std::size_t f = 0; f < n_folds; ++f) {
    const auto train = plan.train_rows(static_cast<int>(f));
    const auto test = plan.test_rows(static_cast<int>(f));
    try {
      if (test.empty()) throw PlanError("fold is empty");
      Standardizer z_all;
      if (options.standardize) z_all = Standardizer::fit(table, all_names, train);
      const Standardizer* zp = options.standardize ? &z_all : nullptr;

      auto gather = [&](const std::vector<std::size_t>& rows) {
        std::vector<double> y;
        std::vector<std::string> g;
        y.reserve(rows.size());
        g.reserve(rows.size());
        for (std::size_t r : rows) {
          y.push_back(y_all[r]);
          g.push_back(g_all[r]);
        }
        return std::pair(std::move(y), std::move(g));
      };
      const auto [y_train, g_train] = gather(train);
      const auto [y_test, g_test] = gather(test);

      auto score = [&](const std::vector<std::string>& cols) {
        Standardizer z;
        if (zp) z = select(z_all, all_names, cols);
        const Standardizer* zs = zp ? &z : nullptr;
        const Eigen::MatrixXd X_train = design_matrix(table, cols, train, zs);
        const LMEFit fit = fit_lme(X_train, y_train, g_train, options.lme);
        const Eigen::MatrixXd X_test = design_matrix(table, cols, test, zs);
        return heldout_loglik(fit, X_test, y_test, g_test, options.heldout);
      };

      std::vector<std::string> base_dropped;
      const auto base_cols = independent_columns(table, baseline, train, zp, all_names,
                                                 options.lme.rank_tol, base_dropped);
      for (const auto& c : base_dropped) {
        result.notes.push_back(fmt::format("fold {}: baseline column '{}' dropped (collinear)", f, c));
      }
      const auto ll_base = score(base_cols);

      for (std::size_t m = 0; m < models.size(); ++m) {
        std::vector<std::string> extra_dropped;
        std::vector<std::string> wanted = base_cols;
        wanted.insert(wanted.end(), models[m].extra.begin(), models[m].extra.end());
        const auto cols = independent_columns(table, wanted, train, zp, all_names,
                                              options.lme.rank_tol, extra_dropped);
        for (const auto& c : extra_dropped) dropped[m].insert(c);
        const auto ll = score(cols);
        double gain = 0.0;
        for (std::size_t i = 0; i < ll.size(); ++i) gain += ll[i] - ll_base[i];
        result.models[m].fold_gain[f] = gain / static_cast<double>(ll.size());
      }
    } catch (const Error& e) {
      result.fold_failed[f] = true;
      for (auto& m : result.models) m.fold_gain[f] = std::numeric_limits<double>::quiet_NaN();
      result.notes.push_back(fmt::format("fold {} failed: {}", f, e.what()));
    }
  }

  for (std::size_t m = 0; m < models.size(); ++m) {
    result.models[m].dropped.assign(dropped[m].begin(), dropped[m].end());
    for (const auto& c : dropped[m]) {
      result.notes.push_back(fmt::format("model '{}': column '{}' dropped (collinear)", models[m].name, c));
    }
  }
  if (result.failed_folds() > options.max_failed_folds) {
    throw ComparisonError(fmt::format("{} of {} folds failed", result.failed_folds(), n_folds));
  }
  return result;
}

PairedTest paired_test(const CVResult& cv, const std::string& first, const std::string& second,
                       int bonferroni_m) {
  const auto a = cv.usable_gains(first);
  const auto b = cv.usable_gains(second);
  PairedTest t;
  t.label = first + " vs " + second;
  t.p = paired_permutation_test(a, b);
  t.p_adjusted = bonferroni(t.p, bonferroni_m);
  std::vector<double> d(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) d[i] = b[i] - a[i];
  t.sem = sem(d);
  t.mean_difference = mean(d);
  return t;
}

ComparisonResult compare_models(const PredictorTable& table,
                                const std::vector<std::string>& baseline,
                                const std::string& predictor_a, const std::string& predictor_b,
                                const CVPlan& plan, int bonferroni_m, const CVOptions& options) {
  ComparisonResult out;
  out.name_a = predictor_a;
  out.name_b = predictor_b;
  out.name_both = predictor_a + "+" + predictor_b;
  const std::vector<ModelSpec> models{{predictor_a, {predictor_a}},
                                      {predictor_b, {predictor_b}},
                                      {out.name_both, {predictor_a, predictor_b}}};
  out.cv = cross_validate(table, baseline, models, plan, options);
  out.a_vs_both = paired_test(out.cv, out.name_a, out.name_both, bonferroni_m);
  out.b_vs_both = paired_test(out.cv, out.name_b, out.name_both, bonferroni_m);
  return out;
}

}  // namespace pred::stats
