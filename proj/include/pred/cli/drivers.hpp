#pragma once

#include <string_view>

#include "pred/cli/config.hpp"
#include "pred/cli/report.hpp"

namespace pred::cli {

enum class Hypothesis { kH1, kH2, kH3 };

// Accepts h1, h2, h3 in any case. Throws ConfigError.
Hypothesis parse_hypothesis(std::string_view s);
std::string_view to_string(Hypothesis h);

// Default Bonferroni factors.
inline constexpr int kByMeasureBonferroni = 12;
inline constexpr int kAggregateBonferroni = 3;
inline constexpr int kExp3Bonferroni = 10;

// cloze vs LM surprisal, nested comparison per measure.
RunReport run_exp1(const ExperimentConfig& config);
// cloze vs a manipulated LM predictor, per measure and aggregated over
// measures, plus the correlation of each probability set with cloze.
RunReport run_exp2(const ExperimentConfig& config, Hypothesis hypothesis);
// cloze vs similarity-adjusted cloze vs similarity-adjusted LM samples.
// Throws UnsupportedDatasetError when the cloze set is not raw.
RunReport run_exp3(const ExperimentConfig& config);
// Smoothing x transform grid per measure.
RunReport run_grid(const ExperimentConfig& config);
// Pearson correlations of LM-based probability sets with cloze.
RunReport run_correlate(const ExperimentConfig& config);

}  // namespace pred::cli
