#include <CLI11.hpp>

#include <fmt/format.h>

#include <iostream>

#include "pred/cli/drivers.hpp"
#include "pred/error.hpp"
#include "pred/lm/dump.hpp"
#include "pred/lm/toy_provider.hpp"
#include "pred/lm/wire.hpp"

namespace {

using pred::cli::ExperimentConfig;

struct Flags {
  std::vector<std::string> measures;
  std::string transform = "S^2";
  std::string hypothesis;
  std::string heldout = "conditional";
  std::string similarity = "cosine";
  std::string aggregation = "mean";
  bool no_correction = false;
  bool keep_edges = false;
};

void add_common(CLI::App* app, ExperimentConfig& c, Flags& f) {
  app->add_option("--stimuli", c.stimuli, "stimulus CSV");
  app->add_option("--cloze", c.cloze, "cloze responses (JSON lines)");
  app->add_option("--rt", c.rt, "reading-time CSV (repeat once per measure)");
  app->add_option("--measure", f.measures, "SPR, FP or GP, one per --rt");
  app->add_option("--dump", c.dump, "PDLM distribution dump");
  app->add_option("--toy-model", c.toy_model, "toy n-gram model (JSON)");
  app->add_option("--embeddings", c.embeddings, "PDEM embedding matrix");
  app->add_option("--freq", c.freq, "word frequency CSV (word,per_billion)");
  app->add_option("--samples", c.samples, "stored word samples (JSON lines)");
  app->add_option("--provider-cmd", c.provider_command,
                  "command serving the line protocol (vocabulary taken from --dump)")
      ->expected(1, -1)
      ->delimiter(' ');
  app->add_option("--out-dir", c.out_dir, "output directory")->capture_default_str();
  app->add_option("--seed", c.seed, "random seed")->capture_default_str();
  app->add_option("--smoothing", c.smoothing, "add-one smoothing S")->capture_default_str();
  app->add_option("--transform", f.transform, "predictor transform: P, S, S^n/d")->capture_default_str();
  app->add_option("--folds", c.n_folds, "cross-validation folds")->capture_default_str();
  app->add_option("--runs", c.runs, "runs for stochastic estimators")->capture_default_str();
  app->add_option("--bonferroni", c.bonferroni_m, "override the Bonferroni factor");
  app->add_option("--heldout", f.heldout, "conditional or marginal")->capture_default_str();
  app->add_flag("--whole-item", c.whole_item, "condition on the whole item, not just the sentence");
  app->add_flag("--no-whitespace-correction", f.no_correction, "drop the word-boundary mass");
  app->add_flag("--keep-edges", f.keep_edges, "keep sentence- and line-edge words");
  app->add_option("--resamples", c.bootstrap_resamples, "bootstrap resamples")->capture_default_str();
}

void finish_config(ExperimentConfig& c, const Flags& f) {
  c.measures.clear();
  for (const auto& m : f.measures) c.measures.push_back(pred::parse_measure(m));
  c.transform = pred::cloze::parse_transform(f.transform);
  if (f.heldout == "conditional") {
    c.heldout = pred::stats::HeldoutMode::kConditional;
  } else if (f.heldout == "marginal") {
    c.heldout = pred::stats::HeldoutMode::kMarginal;
  } else {
    throw pred::ConfigError("--heldout must be conditional or marginal");
  }
  using S = pred::manip::SimilarityConfig;
  if (f.similarity == "cosine") {
    c.similarity.similarity = S::Similarity::kCosine;
  } else if (f.similarity == "response-normalized") {
    c.similarity.similarity = S::Similarity::kResponseNormalized;
  } else {
    throw pred::ConfigError("--similarity must be cosine or response-normalized");
  }
  if (f.aggregation == "mean") {
    c.similarity.aggregation = S::Aggregation::kMean;
  } else if (f.aggregation == "sum") {
    c.similarity.aggregation = S::Aggregation::kSum;
  } else {
    throw pred::ConfigError("--aggregation must be mean or sum");
  }
  c.whitespace_correction = !f.no_correction;
  if (f.keep_edges) {
    c.filter.drop_sentence_edges = false;
    c.filter.drop_line_edges = false;
  }
}

int finish_report(const pred::cli::RunReport& report, const ExperimentConfig& config) {
  pred::cli::write_report(report, config);
  for (const auto& s : report.status) {
    std::cerr << fmt::format("{:<10} {}{}\n", s.item, s.ok ? "ok" : "FAILED",
                             s.message.empty() ? "" : ": " + s.message);
  }
  std::cerr << "wrote " << config.out_dir.string() << '\n';
  return report.ok() ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"predtk: cloze and language-model predictability against reading times"};
  app.require_subcommand(1);

  ExperimentConfig config;
  Flags flags;

  auto* exp1 = app.add_subcommand("exp1", "cloze vs LM surprisal");
  auto* exp2 = app.add_subcommand("exp2", "cloze vs a manipulated LM predictor");
  auto* exp3 = app.add_subcommand("exp3", "similarity-adjusted surprisal");
  auto* grid = app.add_subcommand("grid", "smoothing x transform grid for cloze surprisal");
  auto* corr = app.add_subcommand("correlate", "correlate LM-based probabilities with cloze");
  for (auto* sub : {exp1, exp2, exp3, grid, corr}) add_common(sub, config, flags);

  exp2->add_option("--hypothesis", flags.hypothesis, "h1, h2 or h3")->required();
  for (auto* sub : {exp2, corr}) {
    sub->add_option("--k", config.k, "clusters for h2")->capture_default_str();
    sub->add_option("--threshold", config.threshold, "per-billion frequency threshold for h3")
        ->capture_default_str();
    sub->add_option("--kmeans-restarts", config.kmeans_restarts, "k-means restarts per run")
        ->capture_default_str();
  }
  for (auto* sub : {exp3}) {
    sub->add_option("--similarity", flags.similarity, "cosine or response-normalized")->capture_default_str();
    sub->add_option("--aggregation", flags.aggregation, "mean or sum")->capture_default_str();
  }
  grid->add_option("--train-fraction", config.grid_train_fraction, "share of each subject's rows used")
      ->capture_default_str();

  auto* toy_dump = app.add_subcommand("toy-dump", "write a PDLM dump from a toy model for a corpus");
  std::string toy_out;
  toy_dump->add_option("--stimuli", config.stimuli, "stimulus CSV")->required();
  toy_dump->add_option("--toy-model", config.toy_model, "toy n-gram model (JSON)")->required();
  toy_dump->add_option("--out", toy_out, "output dump path")->required();
  toy_dump->add_flag("--whole-item", config.whole_item, "condition on the whole item");

  auto* serve = app.add_subcommand("serve", "answer dist/score requests on stdin from a dump or toy model");
  std::filesystem::path serve_dump;
  std::filesystem::path serve_toy;
  auto* serve_dump_opt = serve->add_option("--dump", serve_dump, "PDLM distribution dump");
  serve->add_option("--toy-model", serve_toy, "toy n-gram model (JSON)")->excludes(serve_dump_opt);

  CLI11_PARSE(app, argc, argv);

  try {
    if (toy_dump->parsed()) {
      const auto corpus = pred::load_stimuli(config.stimuli);
      const auto model = pred::lm::load_toy_model(config.toy_model);
      pred::lm::write_distribution_dump(toy_out, pred::lm::capture_corpus_dump(*model, corpus, config.whole_item));
      return 0;
    }
    if (serve->parsed()) {
      std::unique_ptr<pred::lm::DistributionProvider> provider;
      if (!serve_dump.empty()) {
        provider = pred::lm::replay_provider(pred::lm::load_distribution_dump(serve_dump));
      } else if (!serve_toy.empty()) {
        provider = pred::lm::load_toy_model(serve_toy);
      } else {
        throw pred::ConfigError("serve needs --dump or --toy-model");
      }
      pred::lm::serve(*provider, std::cin, std::cout);
      return 0;
    }
    finish_config(config, flags);
    if (exp1->parsed()) return finish_report(pred::cli::run_exp1(config), config);
    if (exp2->parsed()) {
      return finish_report(pred::cli::run_exp2(config, pred::cli::parse_hypothesis(flags.hypothesis)), config);
    }
    if (exp3->parsed()) return finish_report(pred::cli::run_exp3(config), config);
    if (grid->parsed()) return finish_report(pred::cli::run_grid(config), config);
    if (corr->parsed()) return finish_report(pred::cli::run_correlate(config), config);
  } catch (const pred::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
