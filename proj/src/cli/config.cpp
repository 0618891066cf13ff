#include "pred/cli/config.hpp"

#include <fstream>
#include <iterator>
#include <set>

#include <fmt/format.h>

#include "pred/error.hpp"
#include "pred/lm/dump.hpp"
#include "pred/lm/toy_provider.hpp"
#include "pred/lm/wire.hpp"

namespace pred::cli {

std::uint64_t fnv1a(std::string_view bytes, std::uint64_t h) {
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::uint64_t file_digest(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read " + path.string());
  const std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return fnv1a(bytes);
}

std::string ExperimentConfig::canonical() const {
  std::string s;
  auto add = [&](std::string_view key, const std::string& value) {
    s += fmt::format("{}={}\n", key, value);
  };
  add("stimuli", stimuli.string());
  add("cloze", cloze.string());
  for (std::size_t i = 0; i < rt.size(); ++i) {
    add("rt", fmt::format("{}:{}", i < measures.size() ? to_string(measures[i]) : "?", rt[i].string()));
  }
  add("dump", dump.string());
  add("toy_model", toy_model.string());
  add("embeddings", embeddings.string());
  add("freq", freq.string());
  add("samples", samples.string());
  if (!provider_command.empty()) {
    std::string cmd;
    for (const auto& a : provider_command) cmd += (cmd.empty() ? "" : " ") + a;
    add("provider_command", cmd);
  }
  add("smoothing", std::to_string(smoothing));
  add("transform", transform.name());
  add("n_folds", std::to_string(n_folds));
  add("runs", std::to_string(runs));
  add("seed", std::to_string(seed));
  add("k", std::to_string(k));
  add("threshold", fmt::format("{}", threshold));
  add("kmeans_restarts", std::to_string(kmeans_restarts));
  add("bonferroni_m", std::to_string(bonferroni_m));
  add("whole_item", whole_item ? "1" : "0");
  add("whitespace_correction", whitespace_correction ? "1" : "0");
  add("heldout", heldout == stats::HeldoutMode::kConditional ? "conditional" : "marginal");
  add("similarity", similarity.similarity == manip::SimilarityConfig::Similarity::kCosine ? "cosine" : "response_normalized");
  add("aggregation", similarity.aggregation == manip::SimilarityConfig::Aggregation::kMean ? "mean" : "sum");
  add("filter", fmt::format("{},{},{},{:d},{:d},{:d}", filter.spr_max_ms, filter.fp_max_ms, filter.gp_max_ms,
                            filter.drop_sentence_edges, filter.drop_line_edges, filter.drop_incorrect_trials));
  add("grid_train_fraction", fmt::format("{}", grid_train_fraction));
  add("bootstrap_resamples", std::to_string(bootstrap_resamples));
  return s;
}

std::uint64_t ExperimentConfig::hash() const { return fnv1a(canonical()); }

void validate(const ExperimentConfig& config, const Needs& needs) {
  std::vector<std::string> problems;
  auto need_file = [&](const fs::path& p, std::string_view flag) {
    if (p.empty()) {
      problems.push_back(fmt::format("{} is required", flag));
    } else if (!fs::is_regular_file(p)) {
      problems.push_back(fmt::format("{} {} does not exist", flag, p.string()));
    }
  };
  need_file(config.stimuli, "--stimuli");
  need_file(config.cloze, "--cloze");
  if (needs.rt) {
    if (config.rt.empty()) problems.emplace_back("--rt is required");
    if (config.rt.size() != config.measures.size()) problems.emplace_back("give one --measure per --rt file");
    for (const auto& p : config.rt) need_file(p, "--rt");
  }
  if (needs.freq) need_file(config.freq, "--freq");
  if (needs.provider) {
    if (config.dump.empty() && config.toy_model.empty()) {
      problems.emplace_back("--dump or --toy-model is required");
    } else if (!config.dump.empty() && !config.toy_model.empty()) {
      problems.emplace_back("give only one of --dump and --toy-model");
    } else {
      need_file(config.dump.empty() ? config.toy_model : config.dump,
                config.dump.empty() ? "--toy-model" : "--dump");
    }
  }
  if (!config.provider_command.empty() && config.dump.empty()) {
    problems.emplace_back("--provider-cmd needs --dump for the vocabulary and segmentation");
  }
  if (needs.embeddings) need_file(config.embeddings, "--embeddings");
  if (!config.samples.empty()) need_file(config.samples, "--samples");
  if (config.n_folds < 2) problems.emplace_back("--folds must be at least 2");
  if (config.runs < 1) problems.emplace_back("--runs must be at least 1");
  if (config.smoothing < 1) problems.emplace_back("--smoothing must be at least 1");
  if (!problems.empty()) {
    std::string msg = "invalid configuration:";
    for (const auto& p : problems) msg += "\n  " + p;
    throw ConfigError(msg);
  }
}

std::vector<ContextId> Inputs::contexts() const {
  std::set<ContextId> seen;
  for (const auto& [m, obs] : observations) {
    for (const auto& o : obs) seen.insert(o.context);
  }
  return {seen.begin(), seen.end()};
}

Inputs load_inputs(const ExperimentConfig& config, const Needs& needs) {
  validate(config, needs);
  Inputs in;
  in.corpus = load_stimuli(config.stimuli);
  in.cloze = load_cloze_responses(config.cloze, in.corpus);
  if (needs.freq) in.freq = manip::load_frequency_table(config.freq);

  if (needs.rt) {
    for (std::size_t i = 0; i < config.rt.size(); ++i) {
      const Measure m = config.measures[i];
      auto raw = load_rt_data(config.rt[i], in.corpus, m);
      auto kept = filter_rt(raw, in.corpus, config.filter);
      std::vector<RTObservation> covered;
      for (auto& o : kept) {
        if (in.cloze.has(o.context)) covered.push_back(std::move(o));
      }
      in.notes.push_back(fmt::format("{}: {} rows read, {} after filtering, {} with cloze coverage",
                                     to_string(m), raw.size(), kept.size(), covered.size()));
      in.observations.emplace_back(m, std::move(covered));
    }
  }

  if (needs.provider) {
    if (!config.provider_command.empty()) {
      auto dump = lm::load_distribution_dump(config.dump, &in.corpus);
      in.provider = std::make_unique<lm::WireProvider>(
          std::move(dump.segmentation), std::make_unique<lm::ProcessTransport>(config.provider_command));
    } else if (!config.dump.empty()) {
      in.provider = lm::replay_provider(lm::load_distribution_dump(config.dump, &in.corpus));
    } else {
      in.provider = lm::load_toy_model(config.toy_model);
    }
  }
  if (needs.embeddings) {
    in.embeddings = lm::load_embeddings(config.embeddings);
    if (in.provider && in.embeddings->rows() != in.provider->vocab().size()) {
      throw ConfigError(fmt::format("embedding rows ({}) differ from the vocabulary size ({})",
                                    in.embeddings->rows(), in.provider->vocab().size()));
    }
  }
  if (!config.samples.empty()) in.samples = manip::read_sample_sets(config.samples);
  if (!in.freq.coverage_note.empty()) in.notes.push_back(in.freq.coverage_note);
  return in;
}

}  // namespace pred::cli
