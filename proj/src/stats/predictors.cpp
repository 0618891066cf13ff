#include "pred/stats/predictors.hpp"

#include <algorithm>
#include <cmath>

#include "pred/error.hpp"

namespace pred::stats {

PredictorTable::PredictorTable(std::vector<double> rt, std::vector<std::string> groups)
    : rt_(std::move(rt)), groups_(std::move(groups)) {
  if (rt_.size() != groups_.size()) throw DomainError("response/group length mismatch");
  for (double v : rt_) {
    if (!std::isfinite(v)) throw DomainError("non-finite response value");
  }
}

void PredictorTable::add_column(std::string name, std::vector<double> values) {
  if (values.size() != rt_.size()) {
    throw DomainError("column '" + name + "' has " + std::to_string(values.size()) +
                      " rows, expected " + std::to_string(rt_.size()));
  }
  if (has_column(name)) throw DomainError("duplicate column '" + name + "'");
  for (double v : values) {
    if (!std::isfinite(v)) throw DomainError("column '" + name + "' has a missing value");
  }
  names_.push_back(std::move(name));
  columns_.push_back(std::move(values));
}

bool PredictorTable::has_column(std::string_view name) const {
  return std::find(names_.begin(), names_.end(), name) != names_.end();
}

const std::vector<double>& PredictorTable::column(std::string_view name) const {
  auto it = std::find(names_.begin(), names_.end(), name);
  if (it == names_.end()) throw DomainError("no column '" + std::string(name) + "'");
  return columns_[static_cast<std::size_t>(it - names_.begin())];
}

PredictorTable PredictorTable::subset(std::span<const std::size_t> rows) const {
  std::vector<double> rt;
  std::vector<std::string> groups;
  rt.reserve(rows.size());
  groups.reserve(rows.size());
  for (std::size_t r : rows) {
    rt.push_back(rt_.at(r));
    groups.push_back(groups_.at(r));
  }
  PredictorTable out(std::move(rt), std::move(groups));
  for (std::size_t c = 0; c < names_.size(); ++c) {
    std::vector<double> col;
    col.reserve(rows.size());
    for (std::size_t r : rows) col.push_back(columns_[c][r]);
    out.add_column(names_[c], std::move(col));
  }
  return out;
}

Standardizer Standardizer::fit(const PredictorTable& table, std::span<const std::string> columns,
                               std::span<const std::size_t> rows) {
  Standardizer s;
  for (const auto& name : columns) {
    const auto& col = table.column(name);
    double mean = 0.0;
    for (std::size_t r : rows) mean += col[r];
    mean /= static_cast<double>(rows.size());
    double ss = 0.0;
    for (std::size_t r : rows) ss += (col[r] - mean) * (col[r] - mean);
    const double sd = rows.size() > 1 ? std::sqrt(ss / static_cast<double>(rows.size() - 1)) : 0.0;
    s.mean.push_back(mean);
    s.scale.push_back(sd > 0.0 ? sd : 1.0);
  }
  return s;
}

Eigen::MatrixXd design_matrix(const PredictorTable& table, std::span<const std::string> columns,
                              std::span<const std::size_t> rows, const Standardizer* standardizer) {
  const auto n = static_cast<Eigen::Index>(rows.size());
  Eigen::MatrixXd X(n, static_cast<Eigen::Index>(columns.size()) + 1);
  X.col(0).setOnes();
  for (std::size_t c = 0; c < columns.size(); ++c) {
    const auto& col = table.column(columns[c]);
    const double mean = standardizer ? standardizer->mean[c] : 0.0;
    const double scale = standardizer ? standardizer->scale[c] : 1.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      X(i, static_cast<Eigen::Index>(c) + 1) = (col[rows[static_cast<std::size_t>(i)]] - mean) / scale;
    }
  }
  return X;
}

double unigram_surprisal(const manip::FrequencyTable& freq, std::string_view word,
                         double floor_per_billion) {
  double pb = freq.per_billion(word);
  if (pb <= 0.0) pb = floor_per_billion;
  return -std::log2(pb / 1e9);
}

std::size_t utf8_length(std::string_view s) {
  std::size_t n = 0;
  for (unsigned char c : s) {
    if ((c & 0xC0) != 0x80) ++n;
  }
  return n;
}

std::vector<std::string> baseline_columns(Measure measure) {
  std::vector<std::string> cols{std::string(kWordLength), std::string(kWordPosition),
                                std::string(kUnigramSurprisal)};
  if (measure != Measure::kSPR) cols.emplace_back(kPrevFixated);
  return cols;
}

PredictorTable baseline_predictors(const std::vector<RTObservation>& observations,
                                   const StimulusCorpus& corpus,
                                   const manip::FrequencyTable& freq) {
  std::vector<double> rt;
  std::vector<std::string> groups;
  std::vector<double> length, position, unigram, prev;
  bool eye_tracking = !observations.empty() && observations.front().measure != Measure::kSPR;
  for (const auto& obs : observations) {
    const WordToken& w = corpus.word(obs.context);
    rt.push_back(obs.rt);
    groups.push_back(obs.subject_id);
    length.push_back(static_cast<double>(utf8_length(w.text)));
    position.push_back(static_cast<double>(w.word_index));
    unigram.push_back(unigram_surprisal(freq, w.text));
    if (eye_tracking) {
      if (!obs.prev_word_fixated) {
        throw DomainError("missing prev_word_fixated at " + to_string(obs.context));
      }
      prev.push_back(*obs.prev_word_fixated ? 1.0 : 0.0);
    }
  }
  PredictorTable table(std::move(rt), std::move(groups));
  table.add_column(std::string(kWordLength), std::move(length));
  table.add_column(std::string(kWordPosition), std::move(position));
  table.add_column(std::string(kUnigramSurprisal), std::move(unigram));
  if (eye_tracking) table.add_column(std::string(kPrevFixated), std::move(prev));
  return table;
}

}  // namespace pred::stats
