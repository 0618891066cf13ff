#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>

#include "pred/corpus.hpp"
#include "pred/csv.hpp"
#include "pred/error.hpp"

namespace pred {

std::string_view to_string(Measure m) {
  switch (m) {
    case Measure::kSPR: return "SPR";
    case Measure::kFP: return "FP";
    case Measure::kGP: return "GP";
  }
  return "?";
}

Measure parse_measure(std::string_view s) {
  std::string up(s);
  for (char& c : up) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  if (up == "SPR") return Measure::kSPR;
  if (up == "FP") return Measure::kFP;
  if (up == "GP") return Measure::kGP;
  throw ParseError("unknown measure '" + std::string(s) + "'");
}

namespace {

double parse_double(const std::string& s, std::size_t line_no, const char* what) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) {
    throw ParseError(std::string("invalid ") + what + " '" + s + "'", line_no);
  }
  return v;
}

std::optional<bool> parse_flag(const csv::Table& t, const std::vector<std::string>& row,
                               int col, std::size_t line_no) {
  if (col < 0 || col >= static_cast<int>(row.size()) || row[col].empty()) return std::nullopt;
  if (row[col] == "1") return true;
  if (row[col] == "0") return false;
  throw ParseError("expected 0/1 in column " + t.header[col], line_no);
}

}  // namespace

std::vector<RTObservation> load_rt_data(const std::filesystem::path& path,
                                        const StimulusCorpus& corpus, Measure measure) {
  const csv::Table t = csv::read_file(path, /*allow_short_rows=*/true);
  const int c_subj = t.column("subject_id");
  const int c_item = t.column("item_id");
  const int c_sent = t.column("sentence_id");
  const int c_index = t.column("word_index");
  const int c_measure = t.column("measure");
  const int c_rt = t.column("rt_ms");
  const int c_prev = t.column("prev_fixated");
  const int c_correct = t.column("correct");
  if (std::min({c_subj, c_item, c_sent, c_index, c_measure, c_rt}) < 0) {
    throw ParseError(
        "RT header must contain subject_id,item_id,sentence_id,word_index,measure,rt_ms", 1);
  }
  const int required = std::max({c_subj, c_item, c_sent, c_index, c_measure, c_rt});

  std::vector<RTObservation> out;
  out.reserve(t.rows.size());
  for (const auto& [line_no, f] : t.rows) {
    if (static_cast<int>(f.size()) <= required) throw ParseError("too few fields", line_no);
    RTObservation obs;
    obs.subject_id = f[c_subj];
    if (obs.subject_id.empty()) throw ParseError("empty subject_id", line_no);
    obs.context.item_id = f[c_item];
    obs.context.sentence_id = f[c_sent];
    {
      const std::string& s = f[c_index];
      auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), obs.context.word_index);
      if (ec != std::errc() || ptr != s.data() + s.size()) {
        throw ParseError("invalid word_index '" + s + "'", line_no);
      }
    }
    obs.measure = parse_measure(f[c_measure]);
    if (obs.measure != measure) {
      throw ParseError("measure " + f[c_measure] + " does not match requested " +
                           std::string(to_string(measure)),
                       line_no);
    }
    obs.rt = parse_double(f[c_rt], line_no, "rt_ms");
    if (obs.rt <= 0.0) {
      throw IntegrityError("non-positive RT " + f[c_rt] + " (line " + std::to_string(line_no) +
                           ")");
    }
    obs.prev_word_fixated = parse_flag(t, f, c_prev, line_no);
    obs.trial_correct = parse_flag(t, f, c_correct, line_no);
    if (measure != Measure::kSPR && !obs.prev_word_fixated) {
      throw IntegrityError("prev_fixated is required for eye-tracking measures (line " +
                           std::to_string(line_no) + ")");
    }
    if (!corpus.contains(obs.context)) {
      throw ReferenceError("RT row references unknown context " + to_string(obs.context) +
                           " (line " + std::to_string(line_no) + ")");
    }
    out.push_back(std::move(obs));
  }
  return out;
}

std::vector<RTObservation> filter_rt(const std::vector<RTObservation>& observations,
                                     const StimulusCorpus& corpus, const FilterConfig& config) {
  std::vector<RTObservation> out;
  out.reserve(observations.size());
  for (const auto& obs : observations) {
    const WordPlacement& p = corpus.placement(obs.context);
    if (config.drop_sentence_edges && (p.sentence_first || p.sentence_last)) continue;
    if (config.drop_line_edges && (p.line_first || p.line_last)) continue;
    const double limit = obs.measure == Measure::kFP   ? config.fp_max_ms
                         : obs.measure == Measure::kGP ? config.gp_max_ms
                                                       : config.spr_max_ms;
    if (obs.rt > limit) continue;
    if (config.drop_incorrect_trials && obs.trial_correct == false) continue;
    out.push_back(obs);
  }
  return out;
}

}  // namespace pred
