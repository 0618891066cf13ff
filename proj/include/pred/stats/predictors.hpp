#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "pred/corpus.hpp"
#include "pred/manip/frequency.hpp"

namespace pred::stats {

inline constexpr std::string_view kWordLength = "word_length";
inline constexpr std::string_view kWordPosition = "word_position";
inline constexpr std::string_view kUnigramSurprisal = "unigram_surprisal";
inline constexpr std::string_view kPrevFixated = "prev_word_fixated";

// Regression input: response, grouping factor, and named predictor columns,
// all aligned row-for-row with the RT observations they came from.
class PredictorTable {
 public:
  PredictorTable() = default;
  PredictorTable(std::vector<double> rt, std::vector<std::string> groups);

  // Throws DomainError on length mismatch, non-finite values, or a
  // duplicate name.
  void add_column(std::string name, std::vector<double> values);

  std::size_t rows() const { return rt_.size(); }
  bool has_column(std::string_view name) const;
  const std::vector<double>& column(std::string_view name) const;
  const std::vector<std::string>& names() const { return names_; }
  const std::vector<double>& response() const { return rt_; }
  const std::vector<std::string>& groups() const { return groups_; }

  PredictorTable subset(std::span<const std::size_t> rows) const;

 private:
  std::vector<double> rt_;
  std::vector<std::string> groups_;
  std::vector<std::string> names_;
  std::vector<std::vector<double>> columns_;
};

// Column-wise affine map fitted on training rows (z-scoring). Columns with
// zero spread are centered only.
struct Standardizer {
  std::vector<double> mean;
  std::vector<double> scale;

  static Standardizer fit(const PredictorTable& table, std::span<const std::string> columns,
                          std::span<const std::size_t> rows);
};

// Builds [1 | columns...] for the selected rows; when `standardizer` is
// given each column is mapped through it.
Eigen::MatrixXd design_matrix(const PredictorTable& table, std::span<const std::string> columns,
                              std::span<const std::size_t> rows,
                              const Standardizer* standardizer = nullptr);

// -log2(per_billion / 1e9); absent or zero entries use `floor_per_billion`.
double unigram_surprisal(const manip::FrequencyTable& freq, std::string_view word,
                         double floor_per_billion = 0.01);

// Number of Unicode code points in a UTF-8 string.
std::size_t utf8_length(std::string_view s);

// Baseline covariates: word length in characters, position in the
// sentence, unigram surprisal, and (eye-tracking measures) whether the
// preceding word was fixated.
PredictorTable baseline_predictors(const std::vector<RTObservation>& observations,
                                   const StimulusCorpus& corpus,
                                   const manip::FrequencyTable& freq);

std::vector<std::string> baseline_columns(Measure measure);

}  // namespace pred::stats
