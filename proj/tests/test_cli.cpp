#include <cmath>
#include <cstdlib>
#include <fstream>
#include <regex>
#include <sstream>

#include "gtest/gtest.h"
#include "pred/cli/config.hpp"
#include "pred/cli/drivers.hpp"
#include "pred/cli/report.hpp"
#include "pred/csv.hpp"
#include "pred/error.hpp"
#include "pred/lm/dump.hpp"
#include "pred/lm/toy_provider.hpp"
#include "support.hpp"

namespace pred::cli {
namespace {

using testing::TempDir;
using testing::read_file;
using testing::toy_dir;

ExperimentConfig toy_config(const fs::path& out) {
  ExperimentConfig c;
  const auto t = toy_dir();
  c.stimuli = t / "stimuli.csv";
  c.cloze = t / "cloze.jsonl";
  c.rt = {t / "rt_spr.csv", t / "rt_fp.csv", t / "rt_gp.csv"};
  c.measures = {Measure::kSPR, Measure::kFP, Measure::kGP};
  c.toy_model = t / "toy_model.json";
  c.freq = t / "freq.csv";
  c.embeddings = t / "embeddings.pdem";
  c.out_dir = out;
  c.k = 8;
  c.runs = 2;
  c.bootstrap_resamples = 500;
  return c;
}

std::vector<std::vector<std::string>> csv_rows(const fs::path& p) {
  std::ifstream in(p);
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) rows.push_back(csv::split_record(line, rows.size() + 1));
  return rows;
}

bool is_number(const std::string& s) {
  if (s == "nan" || s == "NaN") return true;
  char* end = nullptr;
  std::strtod(s.c_str(), &end);
  return !s.empty() && end == s.c_str() + s.size();
}

// Header matches and the given columns parse as numbers on every row.
void expect_schema(const fs::path& p, const std::vector<std::string>& header,
                   const std::vector<std::size_t>& numeric) {
  ASSERT_TRUE(fs::exists(p)) << p;
  const auto rows = csv_rows(p);
  ASSERT_GE(rows.size(), 2u) << p;
  EXPECT_EQ(rows[0], header) << p;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    ASSERT_EQ(rows[i].size(), header.size()) << p << " row " << i;
    for (auto c : numeric) EXPECT_TRUE(is_number(rows[i][c])) << p << " row " << i << ": " << rows[i][c];
  }
}

void expect_standard_outputs(const fs::path& dir) {
  expect_schema(dir / "report.csv", {"measure", "model", "fold", "mean_gain_nats"}, {2, 3});
  expect_schema(dir / "summary.csv", {"comparison", "p", "p_adjusted", "sem"}, {1, 2, 3});
  EXPECT_TRUE(fs::exists(dir / "chart.svg"));
  EXPECT_NE(read_file(dir / "provenance.txt").find("config"), std::string::npos);
}

void expect_all_ok(const RunReport& r) {
  for (const auto& s : r.status) EXPECT_TRUE(s.ok) << s.item << ": " << s.message;
  EXPECT_TRUE(r.ok());
}

TEST(DriverTest, Exp1) {
  TempDir dir;
  const auto c = toy_config(dir.path());
  const auto r = run_exp1(c);
  expect_all_ok(r);
  write_report(r, c);
  expect_standard_outputs(dir.path());
  // 3 measures x 3 models x 10 folds.
  EXPECT_EQ(csv_rows(dir / "report.csv").size(), 91u);
  EXPECT_EQ(r.summary.size(), 6u);
  for (const auto& s : r.summary) EXPECT_NEAR(s.p_adjusted, std::min(1.0, 12.0 * s.p), 1e-12);
}

class Exp2Test : public ::testing::TestWithParam<Hypothesis> {};

TEST_P(Exp2Test, WritesReports) {
  TempDir dir;
  const auto c = toy_config(dir.path());
  const auto r = run_exp2(c, GetParam());
  expect_all_ok(r);
  write_report(r, c);
  expect_standard_outputs(dir.path());
  expect_schema(dir / "correlations.csv", {"predictor", "r", "ci_low", "ci_high", "n"}, {1, 2, 3, 4});
  bool aggregate = false;
  for (const auto& g : r.chart) aggregate |= g.name == "aggregate";
  EXPECT_TRUE(aggregate);
}

INSTANTIATE_TEST_SUITE_P(Hypotheses, Exp2Test,
                         ::testing::Values(Hypothesis::kH1, Hypothesis::kH2, Hypothesis::kH3));

TEST(DriverTest, Exp3) {
  TempDir dir;
  const auto c = toy_config(dir.path());
  const auto r = run_exp3(c);
  expect_all_ok(r);
  write_report(r, c);
  expect_standard_outputs(dir.path());
}

TEST(DriverTest, Exp3RejectsNonRawCloze) {
  TempDir dir;
  auto c = toy_config(dir / "out");
  std::ifstream in(c.cloze);
  std::ofstream out(dir / "cloze.jsonl");
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    line.pop_back();
    out << line << ", \"raw\": false}\n";
  }
  out.close();
  c.cloze = dir / "cloze.jsonl";
  EXPECT_THROW(run_exp3(c), UnsupportedDatasetError);
}

TEST(DriverTest, Grid) {
  TempDir dir;
  const auto c = toy_config(dir.path());
  const auto r = run_grid(c);
  expect_all_ok(r);
  write_report(r, c);
  ASSERT_EQ(r.grids.size(), 3u);
  for (const auto& g : r.grids) {
    expect_schema(dir / ("grid_" + g.measure + ".csv"), {"S", "transform", "loglik_gain"}, {0, 2});
    ASSERT_TRUE(g.best.has_value());
    EXPECT_EQ(g.best, best_cell(g.cells));
  }
}

TEST(DriverTest, Correlate) {
  TempDir dir;
  const auto c = toy_config(dir.path());
  const auto r = run_correlate(c);
  expect_all_ok(r);
  ASSERT_EQ(r.correlations.size(), 4u);
  for (const auto& row : r.correlations) {
    EXPECT_GE(row.r, -1.0);
    EXPECT_LE(row.r, 1.0);
    EXPECT_LE(row.ci_low, row.r);
    EXPECT_GE(row.ci_high, row.r);
  }
}

TEST(DriverTest, DefaultClusterCountExceedsToyVocabulary) {
  TempDir dir;
  auto c = toy_config(dir.path());
  c.k = 80;
  EXPECT_THROW(run_exp2(c, Hypothesis::kH2), DomainError);
}

TEST(DriverTest, SameSeedSameBytes) {
  TempDir a, b;
  for (const auto* d : {&a, &b}) {
    const auto c = toy_config(d->path());
    write_report(run_exp2(c, Hypothesis::kH1), c);
  }
  for (const char* f : {"chart.svg", "report.csv", "summary.csv", "correlations.csv"}) {
    EXPECT_EQ(read_file(a / f), read_file(b / f)) << f;
  }
}

TEST(ChartTest, BarHeightsFollowGains) {
  const std::vector<ChartGroup> groups{{"SPR", {{"a", 0.02, 0.001, true}, {"b", 0.04, 0.0, false}}},
                                       {"FP", {{"a", -0.01, 0.002, false}}}};
  const auto svg = render_chart(groups, "gains");
  EXPECT_EQ(svg, render_chart(groups, "gains"));
  const std::regex bar(R"re(<rect class="bar"[^>]* height="([0-9.]+)")re");
  std::vector<double> heights;
  for (std::sregex_iterator it(svg.begin(), svg.end(), bar), end; it != end; ++it) {
    heights.push_back(std::stod((*it)[1]));
  }
  ASSERT_EQ(heights.size(), 3u);
  EXPECT_NEAR(heights[1] / heights[0], 2.0, 1e-3);
  EXPECT_NEAR(heights[2] / heights[0], 0.5, 1e-3);
  EXPECT_NE(svg.find(">*</text>"), std::string::npos);
}

TEST(ChartTest, NothingToDraw) {
  EXPECT_THROW(render_chart({}, "empty"), OutputError);
  EXPECT_THROW(render_chart({{"SPR", {}}}, "empty"), OutputError);
  TempDir dir;
  const std::vector<ChartGroup> g{{"SPR", {{"a", 0.1, 0.0, false}}}};
  EXPECT_THROW(emit_chart(g, "x", dir / "missing" / "sub" / "chart.svg"), OutputError);
}

TEST(ConfigTest, ListsEveryProblem) {
  ExperimentConfig c;
  c.stimuli = "/nonexistent/stimuli.csv";
  c.runs = 0;
  try {
    validate(c, Needs{.rt = true, .provider = true, .embeddings = false, .freq = true});
    FAIL();
  } catch (const ConfigError& e) {
    const std::string msg = e.what();
    for (const char* part : {"--stimuli", "--cloze", "--rt", "--dump or --toy-model", "--freq", "--runs"}) {
      EXPECT_NE(msg.find(part), std::string::npos) << part << "\n" << msg;
    }
  }
}

TEST(ConfigTest, HashTracksSettings) {
  TempDir dir;
  auto a = toy_config(dir.path());
  auto b = a;
  EXPECT_EQ(a.hash(), b.hash());
  b.seed = 1;
  EXPECT_NE(a.hash(), b.hash());
  EXPECT_EQ(fnv1a(""), 0xcbf29ce484222325ull);
  EXPECT_EQ(fnv1a("a"), 0xaf63dc4c8601ec8cull);
}

// A dump served by a child process gives the same results as the dump read
// directly.
TEST(ProviderCommandTest, MatchesDirectDump) {
  TempDir dir;
  const auto corpus = load_stimuli(toy_dir() / "stimuli.csv");
  const auto model = lm::load_toy_model(toy_dir() / "toy_model.json");
  const auto dump = dir / "toy.pdlm";
  lm::write_distribution_dump(dump, lm::capture_corpus_dump(*model, corpus, false));

  auto direct = toy_config(dir / "direct");
  direct.toy_model.clear();
  direct.dump = dump;
  auto wired = direct;
  wired.out_dir = dir / "wired";
  wired.provider_command = {PREDTK_PATH, "serve", "--dump", dump.string()};

  const auto r1 = run_exp1(direct);
  const auto r2 = run_exp1(wired);
  expect_all_ok(r2);
  ASSERT_EQ(r1.folds.size(), r2.folds.size());
  for (std::size_t i = 0; i < r1.folds.size(); ++i) EXPECT_EQ(r1.folds[i].gain, r2.folds[i].gain);

  auto no_dump = wired;
  no_dump.dump.clear();
  EXPECT_THROW(validate(no_dump, Needs{.rt = true, .provider = true}), ConfigError);
}

int run(const std::string& args) {
  const int status = std::system((std::string(PREDTK_PATH) + " " + args + " >/dev/null 2>&1").c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

TEST(PredtkTest, ExitCodes) {
  TempDir dir;
  const auto t = toy_dir().string();
  const std::string common = "--stimuli " + t + "/stimuli.csv --cloze " + t + "/cloze.jsonl --rt " + t +
                             "/rt_spr.csv --measure SPR --toy-model " + t + "/toy_model.json --freq " + t +
                             "/freq.csv --embeddings " + t + "/embeddings.pdem --out-dir " +
                             (dir / "out").string();
  EXPECT_EQ(run("exp1 " + common), 0);
  EXPECT_TRUE(fs::exists(dir / "out" / "chart.svg"));
  EXPECT_EQ(run("exp2 --hypothesis h2 --k 8 " + common), 0);
  // Errors before any measure runs: k above the vocabulary size, bad
  // configuration.
  EXPECT_EQ(run("exp2 --hypothesis h2 --k 80 " + common), 1);
  EXPECT_EQ(run("exp1 --stimuli /nonexistent.csv"), 1);
  EXPECT_EQ(run("exp2 --hypothesis h9 " + common), 1);
  // Usage errors come from the argument parser.
  EXPECT_NE(run("exp1 --no-such-flag"), 0);
  EXPECT_NE(run(""), 0);
}

TEST(PredtkTest, ServeAnswersRequests) {
  TempDir dir;
  const auto req = dir.write("req.jsonl", "{\"id\":1,\"op\":\"score\",\"prefix\":[],\"cont\":[0]}\n{bad\n");
  const auto out = dir / "rep.jsonl";
  const std::string cmd = std::string(PREDTK_PATH) + " serve --toy-model " + (toy_dir() / "toy_model.json").string() +
                          " < " + req.string() + " > " + out.string();
  ASSERT_EQ(std::system(cmd.c_str()), 0);
  std::istringstream lines(read_file(out));
  std::string first, second;
  std::getline(lines, first);
  std::getline(lines, second);
  EXPECT_NE(first.find("\"logprob\""), std::string::npos) << first;
  EXPECT_NE(second.find("\"error\""), std::string::npos) << second;
  EXPECT_NE(second.find("\"id\":null"), std::string::npos) << second;
}

}  // namespace
}  // namespace pred::cli
