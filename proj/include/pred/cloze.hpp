#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pred/corpus.hpp"
#include "pred/stats/lme.hpp"
#include "pred/stats/predictors.hpp"

namespace pred::cloze {

inline constexpr int kDefaultSmoothing = 200;
inline const std::vector<int> kSmoothingGrid{50, 100, 200, 500, 1000, 2000};

// Add-one estimate (C_w + 1) / (N + S).
double smoothed_probability(int count, int total, int smoothing);

// Same estimate for a word in a stored cloze context. The query word is
// normalized like the responses. Throws MissingContextError.
double cloze_probability(const ClozeResponseSet& responses, const ContextId& context,
                         std::string_view word, int smoothing = kDefaultSmoothing);

// Predictor transform applied before regression. Surprisal is in bits.
struct TransformKind {
  enum class Kind { kRawProb, kSurprisal, kSurprisalPow };
  Kind kind = Kind::kSurprisal;
  int exp_num = 1;
  int exp_den = 1;

  static TransformKind raw_prob() { return {Kind::kRawProb, 1, 1}; }
  static TransformKind surprisal() { return {Kind::kSurprisal, 1, 1}; }
  static TransformKind surprisal_pow(int num, int den = 1) { return {Kind::kSurprisalPow, num, den}; }

  double exponent() const { return static_cast<double>(exp_num) / exp_den; }
  // "P", "S", or "S^n/d" (e.g. "S^3/4", "S^2").
  std::string name() const;
  bool operator==(const TransformKind&) const = default;
};

// Parses the names produced by TransformKind::name(). Throws ParseError.
TransformKind parse_transform(std::string_view name);

// The six functional forms: P, S, S^1/2, S^3/4, S^4/3, S^2.
std::vector<TransformKind> transform_grid();

// Throws DomainError unless 0 < p <= 1.
double transform(double p, const TransformKind& kind);

struct GridCell {
  int smoothing = 0;
  TransformKind transform;
  std::optional<double> loglik_gain;  // nats; empty when a fit failed
  std::string error;
};

struct GridOptions {
  double train_fraction = 0.5;
  std::uint64_t seed = 0;
  stats::LMEOptions lme;
};

// Per subject, a seeded shuffle of that subject's rows keeps the first
// ceil(n_s * fraction). Returned indices are sorted.
std::vector<std::size_t> stratified_split(const std::vector<std::string>& groups,
                                          double fraction, std::uint64_t seed);

// For every (S, transform) cell, fits baseline and baseline + transformed
// cloze predictor on the same training split and records the in-sample
// log-likelihood increase. `baseline` must be aligned with `observations`.
std::vector<GridCell> grid_evaluate(const ClozeResponseSet& responses,
                                    const StimulusCorpus& corpus,
                                    const std::vector<RTObservation>& observations,
                                    const stats::PredictorTable& baseline,
                                    const std::vector<std::string>& baseline_columns,
                                    const std::vector<int>& smoothing_grid,
                                    const std::vector<TransformKind>& transforms,
                                    const GridOptions& options = {});

}  // namespace pred::cloze
