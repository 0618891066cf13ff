#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "pred/cloze.hpp"
#include "pred/error.hpp"
#include "pred/random.hpp"

namespace pred::cloze {

std::vector<std::size_t> stratified_split(const std::vector<std::string>& groups,
                                          double fraction, std::uint64_t seed) {
  if (!(fraction > 0.0) || fraction > 1.0) throw DomainError("train fraction must lie in (0, 1]");
  std::map<std::string, std::vector<std::size_t>> by_group;
  for (std::size_t i = 0; i < groups.size(); ++i) by_group[groups[i]].push_back(i);

  Rng rng(seed);
  std::vector<std::size_t> out;
  for (auto& [g, rows] : by_group) {
    // Fisher-Yates with the project RNG so splits are stable across platforms.
    for (std::size_t i = rows.size(); i > 1; --i) std::swap(rows[i - 1], rows[rng.below(i)]);
    const auto keep = static_cast<std::size_t>(std::ceil(static_cast<double>(rows.size()) * fraction));
    out.insert(out.end(), rows.begin(), rows.begin() + static_cast<std::ptrdiff_t>(keep));
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<GridCell> grid_evaluate(const ClozeResponseSet& responses,
                                    const StimulusCorpus& corpus,
                                    const std::vector<RTObservation>& observations,
                                    const stats::PredictorTable& baseline,
                                    const std::vector<std::string>& baseline_columns,
                                    const std::vector<int>& smoothing_grid,
                                    const std::vector<TransformKind>& transforms,
                                    const GridOptions& options) {
  if (baseline.rows() != observations.size()) {
    throw DomainError("baseline table is not aligned with the observations");
  }
  for (const auto& obs : observations) {
    if (!responses.has(obs.context)) {
      throw CoverageError("no cloze responses for " + to_string(obs.context));
    }
  }

  const auto train = stratified_split(baseline.groups(), options.train_fraction, options.seed);
  std::vector<double> y;
  std::vector<std::string> g;
  for (auto r : train) {
    y.push_back(baseline.response()[r]);
    g.push_back(baseline.groups()[r]);
  }

  const auto fit_on = [&](const stats::PredictorTable& table,
                          const std::vector<std::string>& cols) {
    const auto z = stats::Standardizer::fit(table, cols, train);
    return stats::fit_lme(stats::design_matrix(table, cols, train, &z), y, g, options.lme);
  };

  std::optional<double> base_ll;
  std::string base_error;
  try {
    base_ll = fit_on(baseline, baseline_columns).loglik;
  } catch (const Error& e) {
    base_error = std::string("baseline: ") + e.what();
  }

  std::vector<GridCell> cells;
  for (int s : smoothing_grid) {
    std::vector<double> p(observations.size());
    for (std::size_t i = 0; i < observations.size(); ++i) {
      const auto& ctx = observations[i].context;
      p[i] = cloze_probability(responses, ctx, corpus.word(ctx).text, s);
    }
    for (const auto& t : transforms) {
      GridCell cell{s, t, std::nullopt, base_error};
      if (base_ll) {
        try {
          std::vector<double> col(p.size());
          for (std::size_t i = 0; i < p.size(); ++i) col[i] = transform(p[i], t);
          auto table = baseline;
          table.add_column("cloze", std::move(col));
          auto cols = baseline_columns;
          cols.emplace_back("cloze");
          cell.loglik_gain = fit_on(table, cols).loglik - *base_ll;
        } catch (const Error& e) {
          cell.error = e.what();
        }
      }
      cells.push_back(std::move(cell));
    }
  }
  return cells;
}

}  // namespace pred::cloze
