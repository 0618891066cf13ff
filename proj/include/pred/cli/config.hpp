#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "pred/cloze.hpp"
#include "pred/corpus.hpp"
#include "pred/lm/embedding.hpp"
#include "pred/lm/provider.hpp"
#include "pred/manip/frequency.hpp"
#include "pred/manip/sampling.hpp"
#include "pred/manip/similarity.hpp"
#include "pred/stats/lme.hpp"

namespace pred::cli {

namespace fs = std::filesystem;

struct ExperimentConfig {
  fs::path stimuli;
  fs::path cloze;
  std::vector<fs::path> rt;        // one file per measure
  std::vector<Measure> measures;   // aligned with rt
  fs::path dump;
  fs::path toy_model;
  fs::path embeddings;
  fs::path freq;
  fs::path samples;
  fs::path out_dir = "out";
  // Live provider server, spoken to over the line protocol. The dump given
  // with --dump then only supplies the vocabulary and segmentation.
  std::vector<std::string> provider_command;

  int smoothing = cloze::kDefaultSmoothing;
  cloze::TransformKind transform = cloze::TransformKind::surprisal_pow(2);
  int n_folds = 10;
  int runs = 5;
  std::uint64_t seed = 0;
  int k = 80;
  double threshold = 1e4;
  int kmeans_restarts = 1;
  int bonferroni_m = 0;  // 0: the driver's own factor
  bool whole_item = false;
  bool whitespace_correction = true;
  stats::HeldoutMode heldout = stats::HeldoutMode::kConditional;
  manip::SimilarityConfig similarity;
  FilterConfig filter;
  double grid_train_fraction = 0.5;
  int bootstrap_resamples = 10000;

  // Stable text rendering of every setting; the config hash is taken over it.
  std::string canonical() const;
  std::uint64_t hash() const;
};

// 64-bit FNV-1a.
std::uint64_t fnv1a(std::string_view bytes, std::uint64_t h = 0xcbf29ce484222325ull);
std::uint64_t file_digest(const fs::path& path);

struct Needs {
  bool rt = true;
  bool provider = false;
  bool embeddings = false;
  bool freq = true;
};

// Throws ConfigError naming every missing or unreadable input.
void validate(const ExperimentConfig& config, const Needs& needs);

struct Inputs {
  StimulusCorpus corpus;
  ClozeResponseSet cloze;
  // Filtered observations per measure, restricted to contexts with cloze
  // responses; in the order of config.measures.
  std::vector<std::pair<Measure, std::vector<RTObservation>>> observations;
  manip::FrequencyTable freq;
  std::unique_ptr<lm::DistributionProvider> provider;
  std::optional<lm::EmbeddingMatrix> embeddings;
  std::vector<manip::SampleSet> samples;
  std::vector<std::string> notes;

  // Every distinct context among the observations, sorted.
  std::vector<ContextId> contexts() const;
};

Inputs load_inputs(const ExperimentConfig& config, const Needs& needs);

}  // namespace pred::cli
