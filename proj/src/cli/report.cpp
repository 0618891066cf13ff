#include "pred/cli/report.hpp"

#include <cmath>
#include <fstream>

#include <fmt/format.h>

#include "pred/csv.hpp"
#include "pred/error.hpp"

namespace pred::cli {

namespace {

std::string num(double v) { return std::isfinite(v) ? fmt::format("{:.10g}", v) : std::string(); }

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw OutputError("cannot write " + path.string());
  return out;
}

void finish(std::ofstream& out, const fs::path& path) {
  out.flush();
  if (!out) throw OutputError("failed writing " + path.string());
}

}  // namespace

bool RunReport::ok() const {
  for (const auto& s : status) {
    if (!s.ok) return false;
  }
  return true;
}

void add_comparison_rows(RunReport& report, const std::string& measure, const stats::CVResult& cv) {
  for (const auto& m : cv.models) {
    for (std::size_t f = 0; f < m.fold_gain.size(); ++f) {
      report.folds.push_back({measure, m.name, static_cast<int>(f), m.fold_gain[f]});
    }
  }
}

std::optional<std::size_t> best_cell(const std::vector<cloze::GridCell>& cells) {
  std::optional<std::size_t> best;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (!cells[i].loglik_gain || !std::isfinite(*cells[i].loglik_gain)) continue;
    if (!best || *cells[i].loglik_gain > *cells[*best].loglik_gain) best = i;
  }
  return best;
}

void write_report_csv(const RunReport& report, const fs::path& path) {
  auto out = open_out(path);
  out << "measure,model,fold,mean_gain_nats\n";
  for (const auto& r : report.folds) {
    out << csv::escape(r.measure) << ',' << csv::escape(r.model) << ',' << r.fold << ','
        << num(r.gain) << '\n';
  }
  finish(out, path);
}

void write_summary_csv(const RunReport& report, const fs::path& path) {
  auto out = open_out(path);
  out << "comparison,p,p_adjusted,sem\n";
  for (const auto& s : report.summary) {
    out << csv::escape(s.comparison) << ',' << num(s.p) << ',' << num(s.p_adjusted) << ','
        << num(s.sem) << '\n';
  }
  finish(out, path);
}

void write_correlations_csv(const RunReport& report, const fs::path& path) {
  auto out = open_out(path);
  out << "predictor,r,ci_low,ci_high,n\n";
  for (const auto& c : report.correlations) {
    out << csv::escape(c.predictor) << ',' << num(c.r) << ',' << num(c.ci_low) << ','
        << num(c.ci_high) << ',' << c.n << '\n';
  }
  finish(out, path);
}

void write_grid_csv(const GridReport& grid, const fs::path& path) {
  auto out = open_out(path);
  out << "S,transform,loglik_gain\n";
  for (const auto& c : grid.cells) {
    out << c.smoothing << ',' << csv::escape(c.transform.name()) << ','
        << (c.loglik_gain ? num(*c.loglik_gain) : std::string()) << '\n';
  }
  finish(out, path);
}

void write_provenance(const RunReport& report, const ExperimentConfig& config, const fs::path& path) {
  auto out = open_out(path);
  out << "experiment " << report.experiment << '\n';
  out << "seed " << config.seed << '\n';
  out << fmt::format("config_hash {:016x}\n", config.hash());
  const auto digest = [&](std::string_view name, const fs::path& p) {
    if (p.empty()) return;
    std::string d = "unreadable";
    try {
      d = fmt::format("{:016x}", file_digest(p));
    } catch (const Error&) {
    }
    out << "input " << name << ' ' << p.string() << ' ' << d << '\n';
  };
  digest("stimuli", config.stimuli);
  digest("cloze", config.cloze);
  for (const auto& p : config.rt) digest("rt", p);
  digest("dump", config.dump);
  digest("toy_model", config.toy_model);
  digest("embeddings", config.embeddings);
  digest("freq", config.freq);
  digest("samples", config.samples);
  out << "config\n";
  const std::string canon = config.canonical();
  std::size_t start = 0;
  while (start < canon.size()) {
    const auto end = canon.find('\n', start);
    out << "  " << canon.substr(start, end - start) << '\n';
    start = end + 1;
  }
  for (const auto& g : report.grids) {
    if (g.best) {
      const auto& c = g.cells[*g.best];
      out << fmt::format("best_cell {} S={} transform={} gain={}\n", g.measure, c.smoothing,
                         c.transform.name(), num(*c.loglik_gain));
    }
  }
  for (const auto& n : report.notes) out << "note " << n << '\n';
  for (const auto& s : report.status) {
    out << "status " << s.item << ' ' << (s.ok ? "ok" : "failed");
    if (!s.message.empty()) out << ": " << s.message;
    out << '\n';
  }
  finish(out, path);
}

void write_report(const RunReport& report, const ExperimentConfig& config) {
  std::error_code ec;
  fs::create_directories(config.out_dir, ec);
  if (ec) throw OutputError("cannot create " + config.out_dir.string() + ": " + ec.message());
  if (report.grids.empty()) {
    write_report_csv(report, config.out_dir / "report.csv");
    write_summary_csv(report, config.out_dir / "summary.csv");
  }
  if (!report.correlations.empty()) write_correlations_csv(report, config.out_dir / "correlations.csv");
  for (const auto& g : report.grids) write_grid_csv(g, config.out_dir / ("grid_" + g.measure + ".csv"));
  if (!report.chart.empty()) emit_chart(report.chart, report.experiment, config.out_dir / "chart.svg");
  write_provenance(report, config, config.out_dir / "provenance.txt");
}

}  // namespace pred::cli
