#include "pred/cli/drivers.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <functional>
#include <numeric>

#include <fmt/format.h>

#include "pred/cli/predictors.hpp"
#include "pred/error.hpp"
#include "pred/stats/correlation.hpp"
#include "pred/stats/permutation.hpp"

namespace pred::cli {

namespace {

constexpr double kAlpha = 0.05;

struct MeasureData {
  Measure measure;
  const std::vector<RTObservation>* observations = nullptr;
  stats::PredictorTable table;
  std::vector<std::string> baseline;
  stats::CVPlan plan;
};

std::vector<MeasureData> prepare_measures(const Inputs& in, const ExperimentConfig& config,
                                          RunReport& report) {
  std::vector<MeasureData> out;
  for (const auto& [m, obs] : in.observations) {
    const std::string name(to_string(m));
    if (obs.empty()) {
      report.status.push_back({name, false, "no observations left after filtering"});
      continue;
    }
    try {
      MeasureData d{m, &obs, stats::baseline_predictors(obs, in.corpus, in.freq),
                    stats::baseline_columns(m), stats::make_folds(obs, config.n_folds)};
      out.push_back(std::move(d));
    } catch (const Error& e) {
      report.status.push_back({name, false, e.what()});
    }
  }
  return out;
}

stats::CVOptions cv_options(const ExperimentConfig& config) {
  stats::CVOptions o;
  o.heldout = config.heldout;
  return o;
}

int factor(const ExperimentConfig& config, int fallback) {
  return config.bonferroni_m > 0 ? config.bonferroni_m : fallback;
}

double usable_mean(const stats::CVResult& cv, const std::string& model) {
  const auto g = cv.usable_gains(model);
  return g.empty() ? std::nan("") : stats::mean(g);
}

ChartBar bar(const stats::CVResult& cv, const std::string& model, const std::string& label,
             bool significant) {
  const auto g = cv.usable_gains(model);
  return {label, g.empty() ? 0.0 : stats::mean(g), stats::sem(g), significant};
}

void add_summary(RunReport& report, const std::string& prefix, const stats::PairedTest& t) {
  report.summary.push_back({prefix + ": " + t.label, t.p, t.p_adjusted, t.sem});
}

void note_cv(RunReport& report, const std::string& measure, const stats::CVResult& cv) {
  for (const auto& n : cv.notes) report.notes.push_back(measure + ": " + n);
  if (cv.failed_folds() > 0) {
    report.notes.push_back(fmt::format("{}: {} fold(s) failed", measure, cv.failed_folds()));
  }
}

stats::ComparisonResult run_comparison(const MeasureData& d, const std::string& a,
                                       const ContextValues& va, const std::string& b,
                                       const ContextValues& vb, int m, const ExperimentConfig& config) {
  auto table = d.table;
  table.add_column(a, column_for(*d.observations, va));
  table.add_column(b, column_for(*d.observations, vb));
  return stats::compare_models(table, d.baseline, a, b, d.plan, m, cv_options(config));
}

void record_comparison(RunReport& report, const std::string& measure,
                       const stats::ComparisonResult& r) {
  add_comparison_rows(report, measure, r.cv);
  add_summary(report, measure, r.a_vs_both);
  add_summary(report, measure, r.b_vs_both);
  note_cv(report, measure, r.cv);
  report.chart.push_back({measure,
                          {bar(r.cv, r.name_a, r.name_a, r.a_vs_both.significant(kAlpha)),
                           bar(r.cv, r.name_b, r.name_b, r.b_vs_both.significant(kAlpha)),
                           bar(r.cv, r.name_both, r.name_both, false)}});
}

void add_correlation(RunReport& report, const std::string& name, const ContextValues& cloze,
                     const ContextValues& other, const ExperimentConfig& config) {
  std::vector<double> x, y;
  for (const auto& [ctx, p] : cloze) {
    if (auto it = other.find(ctx); it != other.end()) {
      x.push_back(p);
      y.push_back(it->second);
    }
  }
  try {
    const auto c = stats::pearson_with_ci(x, y, config.bootstrap_resamples, config.seed);
    report.correlations.push_back({name, c.r, c.ci_low, c.ci_high, x.size()});
  } catch (const DomainError& e) {
    report.notes.push_back(fmt::format("correlation {} skipped: {}", name, e.what()));
  }
}

ContextValues transformed(const ContextValues& probs, const cloze::TransformKind& t) {
  return map_values(probs, [&](double p) { return cloze::transform(p, t); });
}

ContextValues to_bits(const ContextValues& logprobs) {
  return map_values(logprobs, [](double lp) { return bits(lp); });
}

ContextValues exp_values(const ContextValues& logprobs) {
  return map_values(logprobs, [](double lp) { return std::exp(lp); });
}

// Aggregate over measures: per fold, the mean gain across the measures.
void aggregate_comparison(RunReport& report, const std::vector<stats::ComparisonResult>& results,
                          const ExperimentConfig& config) {
  if (results.empty()) return;
  const auto& first = results.front();
  const std::size_t folds = first.cv.fold_failed.size();
  stats::CVResult agg;
  agg.fold_failed.assign(folds, false);
  for (const auto* name : {&first.name_a, &first.name_b, &first.name_both}) {
    stats::ModelFolds mf{*name, std::vector<double>(folds, 0.0), {}};
    for (const auto& r : results) {
      const auto& g = r.cv.model(*name).fold_gain;
      for (std::size_t f = 0; f < folds; ++f) mf.fold_gain[f] += g[f] / static_cast<double>(results.size());
    }
    agg.models.push_back(std::move(mf));
  }
  for (std::size_t f = 0; f < folds; ++f) {
    for (const auto& m : agg.models) agg.fold_failed[f] = agg.fold_failed[f] || !std::isfinite(m.fold_gain[f]);
  }
  const int m = factor(config, kAggregateBonferroni);
  try {
    const auto a = stats::paired_test(agg, first.name_a, first.name_both, m);
    const auto b = stats::paired_test(agg, first.name_b, first.name_both, m);
    add_summary(report, "aggregate", a);
    add_summary(report, "aggregate", b);
    add_comparison_rows(report, "aggregate", agg);
    report.chart.push_back({"aggregate",
                            {bar(agg, first.name_a, first.name_a, a.significant(kAlpha)),
                             bar(agg, first.name_b, first.name_b, b.significant(kAlpha)),
                             bar(agg, first.name_both, first.name_both, false)}});
  } catch (const Error& e) {
    report.status.push_back({"aggregate", false, e.what()});
  }
}

std::size_t median_index(const std::vector<double>& values) {
  std::vector<std::size_t> idx(values.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    // NaN (failed runs) sort last.
    const bool fa = std::isfinite(values[a]), fb = std::isfinite(values[b]);
    if (fa != fb) return fa;
    return fa && values[a] < values[b];
  });
  return idx[(idx.size() - 1) / 2];
}

}  // namespace

Hypothesis parse_hypothesis(std::string_view s) {
  std::string lower(s);
  for (char& c : lower) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (lower == "h1") return Hypothesis::kH1;
  if (lower == "h2") return Hypothesis::kH2;
  if (lower == "h3") return Hypothesis::kH3;
  throw ConfigError("unknown hypothesis '" + std::string(s) + "' (expected h1, h2 or h3)");
}

std::string_view to_string(Hypothesis h) {
  switch (h) {
    case Hypothesis::kH1: return "h1";
    case Hypothesis::kH2: return "h2";
    case Hypothesis::kH3: return "h3";
  }
  return "?";
}

RunReport run_exp1(const ExperimentConfig& config) {
  const Inputs in = load_inputs(config, {.rt = true, .provider = true});
  RunReport report;
  report.experiment = "exp1";
  report.notes = in.notes;
  const auto contexts = in.contexts();
  const auto cloze_p = cloze_probabilities(in.cloze, in.corpus, contexts, config.smoothing);
  const auto lm_lp = lm_logprobs(*in.provider, in.corpus, contexts, config.whole_item,
                                 config.whitespace_correction);
  const auto cloze_v = transformed(cloze_p, config.transform);
  const auto lm_v = to_bits(lm_lp);

  for (const auto& d : prepare_measures(in, config, report)) {
    const std::string name(to_string(d.measure));
    try {
      const auto r = run_comparison(d, "cloze", cloze_v, "lm", lm_v, factor(config, kByMeasureBonferroni), config);
      record_comparison(report, name, r);
      report.status.push_back({name, true, ""});
    } catch (const Error& e) {
      report.status.push_back({name, false, e.what()});
    }
  }
  add_correlation(report, "lm", cloze_p, exp_values(lm_lp), config);
  return report;
}

RunReport run_exp2(const ExperimentConfig& config, Hypothesis hypothesis) {
  const bool needs_embeddings = hypothesis == Hypothesis::kH2;
  const Inputs in = load_inputs(config, {.rt = true, .provider = true, .embeddings = needs_embeddings});
  RunReport report;
  const std::string arm(to_string(hypothesis));
  report.experiment = "exp2-" + arm;
  report.notes = in.notes;
  const auto contexts = in.contexts();
  const auto cloze_p = cloze_probabilities(in.cloze, in.corpus, contexts, config.smoothing);
  const auto cloze_v = transformed(cloze_p, config.transform);

  // Manipulated probabilities (prob) and predictor values (pred) per run.
  struct RunValues {
    ContextValues prob;
    ContextValues pred;
  };
  std::function<RunValues(int)> make_run;
  int runs = 1;
  switch (hypothesis) {
    case Hypothesis::kH1:
      runs = config.runs;
      make_run = [&](int r) {
        const auto samples = h1_samples(in.provider.get(), in.corpus, in.cloze, contexts, config.whole_item,
                                        config.seed + static_cast<std::uint64_t>(r),
                                        r == 0 ? in.samples : std::vector<manip::SampleSet>{});
        auto p = h1_probabilities(samples, in.corpus, config.smoothing);
        return RunValues{p, transformed(p, config.transform)};
      };
      if (!in.samples.empty() && runs > 1) {
        report.notes.push_back("stored samples used for run 0; later runs sample from the provider");
      }
      break;
    case Hypothesis::kH2: {
      runs = config.runs;
      make_run = [&](int r) {
        manip::KMeansOptions ko;
        ko.runs = config.kmeans_restarts;
        ko.seed = config.seed + static_cast<std::uint64_t>(r);
        const auto clusters = manip::kmeans_cluster(*in.embeddings, config.k, ko);
        report.notes.push_back(fmt::format("h2 run {}: k={} inertia={:.10g}", r, config.k, clusters.inertia));
        const auto lp = h2_logprobs(*in.provider, in.corpus, contexts, config.whole_item, clusters);
        return RunValues{exp_values(lp), to_bits(lp)};
      };
      break;
    }
    case Hypothesis::kH3:
      make_run = [&](int) {
        const auto split = manip::split_vocab(in.provider->vocab(), in.freq, config.threshold);
        report.notes.push_back(fmt::format("h3: threshold={} |V_F|={} of {}", config.threshold,
                                           split.frequent_count, in.provider->vocab().size()));
        const auto lp = h3_logprobs(*in.provider, in.corpus, contexts, config.whole_item, split);
        return RunValues{exp_values(lp), to_bits(lp)};
      };
      break;
  }

  std::vector<RunValues> values;
  for (int r = 0; r < runs; ++r) values.push_back(make_run(r));

  const auto measures = prepare_measures(in, config, report);
  std::vector<stats::ComparisonResult> chosen;
  std::size_t corr_run = 0;
  for (const auto& d : measures) {
    const std::string name(to_string(d.measure));
    try {
      std::vector<stats::ComparisonResult> results;
      std::vector<double> gains;
      for (int r = 0; r < runs; ++r) {
        results.push_back(run_comparison(d, "cloze", cloze_v, arm, values[static_cast<std::size_t>(r)].pred,
                                         factor(config, kByMeasureBonferroni), config));
        gains.push_back(usable_mean(results.back().cv, arm));
      }
      const std::size_t pick = median_index(gains);
      if (runs > 1) {
        report.notes.push_back(fmt::format("{}: median run {} of {} by {} gain", name, pick, runs, arm));
      }
      if (chosen.empty()) corr_run = pick;
      record_comparison(report, name, results[pick]);
      chosen.push_back(std::move(results[pick]));
      report.status.push_back({name, true, ""});
    } catch (const Error& e) {
      report.status.push_back({name, false, e.what()});
    }
  }
  if (chosen.size() > 1) aggregate_comparison(report, chosen, config);
  add_correlation(report, arm, cloze_p, values[corr_run].prob, config);
  return report;
}

RunReport run_exp3(const ExperimentConfig& config) {
  const Inputs in = load_inputs(config, {.rt = true, .provider = true, .embeddings = true});
  if (!in.cloze.has_raw_responses()) {
    throw UnsupportedDatasetError("similarity-adjusted cloze needs raw per-participant cloze responses");
  }
  RunReport report;
  report.experiment = "exp3";
  report.notes = in.notes;
  const auto contexts = in.contexts();
  const auto cloze_v = transformed(cloze_probabilities(in.cloze, in.corpus, contexts, config.smoothing),
                                   config.transform);

  std::map<ContextId, std::map<std::string, int>> cloze_sets, lm_sets;
  for (const auto& c : contexts) cloze_sets.emplace(c, in.cloze.counts(c));
  for (const auto& s : h1_samples(in.provider.get(), in.corpus, in.cloze, contexts, config.whole_item,
                                  config.seed, in.samples)) {
    auto& m = lm_sets[s.context];
    for (const auto& w : s.samples) ++m[w];
  }
  const auto sa_cloze = to_bits(map_values(
      sa_probabilities(*in.provider, in.corpus, contexts, config.whole_item, *in.embeddings, cloze_sets,
                       config.similarity),
      [](double p) { return std::log(p); }));
  const auto sa_lm = to_bits(map_values(
      sa_probabilities(*in.provider, in.corpus, contexts, config.whole_item, *in.embeddings, lm_sets,
                       config.similarity),
      [](double p) { return std::log(p); }));

  const int m = factor(config, kExp3Bonferroni);
  for (const auto& d : prepare_measures(in, config, report)) {
    const std::string name(to_string(d.measure));
    try {
      auto table = d.table;
      table.add_column("cloze", column_for(*d.observations, cloze_v));
      table.add_column("sa_cloze", column_for(*d.observations, sa_cloze));
      table.add_column("sa_lm", column_for(*d.observations, sa_lm));
      const auto cv = stats::cross_validate(table, d.baseline,
                                            {{"cloze", {"cloze"}}, {"sa_cloze", {"sa_cloze"}}, {"sa_lm", {"sa_lm"}}},
                                            d.plan, cv_options(config));
      const auto vs_cloze = stats::paired_test(cv, "sa_cloze", "cloze", m);
      const auto vs_lm = stats::paired_test(cv, "sa_cloze", "sa_lm", m);
      add_comparison_rows(report, name, cv);
      add_summary(report, name, vs_cloze);
      add_summary(report, name, vs_lm);
      note_cv(report, name, cv);
      report.chart.push_back({name,
                              {bar(cv, "cloze", "cloze", vs_cloze.p_adjusted < kAlpha),
                               bar(cv, "sa_cloze", "sa_cloze", false),
                               bar(cv, "sa_lm", "sa_lm", vs_lm.p_adjusted < kAlpha)}});
      report.status.push_back({name, true, ""});
    } catch (const Error& e) {
      report.status.push_back({name, false, e.what()});
    }
  }
  return report;
}

RunReport run_grid(const ExperimentConfig& config) {
  const Inputs in = load_inputs(config, {.rt = true});
  RunReport report;
  report.experiment = "grid";
  report.notes = in.notes;
  cloze::GridOptions opt;
  opt.train_fraction = config.grid_train_fraction;
  opt.seed = config.seed;
  for (const auto& [measure, obs] : in.observations) {
    const std::string name(to_string(measure));
    try {
      if (obs.empty()) throw CoverageError("no observations left after filtering");
      const auto table = stats::baseline_predictors(obs, in.corpus, in.freq);
      GridReport g{name,
                   cloze::grid_evaluate(in.cloze, in.corpus, obs, table, stats::baseline_columns(measure),
                                        cloze::kSmoothingGrid, cloze::transform_grid(), opt),
                   std::nullopt};
      g.best = best_cell(g.cells);
      bool all_ok = true;
      for (const auto& c : g.cells) {
        if (!c.loglik_gain) {
          all_ok = false;
          report.notes.push_back(fmt::format("{}: cell S={} {} failed: {}", name, c.smoothing,
                                             c.transform.name(), c.error));
        }
      }
      for (int s : cloze::kSmoothingGrid) {
        ChartGroup group{fmt::format("{} S={}", name, s), {}};
        for (const auto& c : g.cells) {
          if (c.smoothing != s) continue;
          const bool best = g.best && &c == &g.cells[*g.best];
          group.bars.push_back({c.transform.name(), c.loglik_gain.value_or(0.0), 0.0, best});
        }
        report.chart.push_back(std::move(group));
      }
      report.grids.push_back(std::move(g));
      report.status.push_back({name, all_ok, all_ok ? "" : "some grid cells failed"});
    } catch (const Error& e) {
      report.status.push_back({name, false, e.what()});
    }
  }
  return report;
}

RunReport run_correlate(const ExperimentConfig& config) {
  const bool with_h2 = !config.embeddings.empty();
  const bool with_h3 = !config.freq.empty();
  const Inputs in = load_inputs(config, {.rt = false, .provider = true, .embeddings = with_h2, .freq = with_h3});
  RunReport report;
  report.experiment = "correlate";
  report.notes = in.notes;
  const auto contexts = in.cloze.contexts();
  const auto cloze_p = cloze_probabilities(in.cloze, in.corpus, contexts, config.smoothing);

  const auto attempt = [&](const std::string& name, const std::function<ContextValues()>& f) {
    try {
      add_correlation(report, name, cloze_p, f(), config);
      report.status.push_back({name, true, ""});
    } catch (const Error& e) {
      report.status.push_back({name, false, e.what()});
    }
  };
  attempt("lm", [&] {
    return exp_values(lm_logprobs(*in.provider, in.corpus, contexts, config.whole_item, config.whitespace_correction));
  });
  attempt("h1", [&] {
    return h1_probabilities(h1_samples(in.provider.get(), in.corpus, in.cloze, contexts, config.whole_item,
                                       config.seed, in.samples),
                            in.corpus, config.smoothing);
  });
  if (with_h2) {
    attempt("h2", [&] {
      manip::KMeansOptions ko;
      ko.runs = config.kmeans_restarts;
      ko.seed = config.seed;
      const auto clusters = manip::kmeans_cluster(*in.embeddings, config.k, ko);
      return exp_values(h2_logprobs(*in.provider, in.corpus, contexts, config.whole_item, clusters));
    });
  }
  if (with_h3) {
    attempt("h3", [&] {
      const auto split = manip::split_vocab(in.provider->vocab(), in.freq, config.threshold);
      return exp_values(h3_logprobs(*in.provider, in.corpus, contexts, config.whole_item, split));
    });
  }
  return report;
}

}  // namespace pred::cli
