#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "pred/cli/config.hpp"
#include "pred/cloze.hpp"
#include "pred/stats/compare.hpp"

namespace pred::cli {

struct FoldRow {
  std::string measure;
  std::string model;
  int fold = 0;
  double gain = 0.0;  // NaN for a failed fold
};

struct SummaryRow {
  std::string comparison;
  double p = 1.0;
  double p_adjusted = 1.0;
  double sem = 0.0;
};

struct CorrelationRow {
  std::string predictor;
  double r = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  std::size_t n = 0;
};

struct ChartBar {
  std::string label;
  double mean = 0.0;
  double sem = 0.0;
  bool significant = false;
};

struct ChartGroup {
  std::string name;
  std::vector<ChartBar> bars;
};

struct ItemStatus {
  std::string item;
  bool ok = true;
  std::string message;
};

struct GridReport {
  std::string measure;
  std::vector<cloze::GridCell> cells;
  std::optional<std::size_t> best;  // index of the largest finite gain
};

struct RunReport {
  std::string experiment;
  std::vector<FoldRow> folds;
  std::vector<SummaryRow> summary;
  std::vector<CorrelationRow> correlations;
  std::vector<ChartGroup> chart;
  std::vector<GridReport> grids;
  std::vector<ItemStatus> status;
  std::vector<std::string> notes;

  bool ok() const;
};

void add_comparison_rows(RunReport& report, const std::string& measure,
                         const stats::CVResult& cv);

std::optional<std::size_t> best_cell(const std::vector<cloze::GridCell>& cells);

// Writes report.csv, summary.csv, chart.svg and provenance.txt, plus
// correlations.csv and grid_<measure>.csv when present. Throws OutputError.
void write_report(const RunReport& report, const ExperimentConfig& config);

void write_report_csv(const RunReport& report, const fs::path& path);
void write_summary_csv(const RunReport& report, const fs::path& path);
void write_correlations_csv(const RunReport& report, const fs::path& path);
void write_grid_csv(const GridReport& grid, const fs::path& path);
void write_provenance(const RunReport& report, const ExperimentConfig& config, const fs::path& path);

// Grouped bar chart with SEM whiskers and asterisks over significant bars.
// Byte-identical for identical input. Throws OutputError when there is
// nothing to draw or the file cannot be written.
std::string render_chart(const std::vector<ChartGroup>& groups, const std::string& title);
void emit_chart(const std::vector<ChartGroup>& groups, const std::string& title, const fs::path& path);

}  // namespace pred::cli
