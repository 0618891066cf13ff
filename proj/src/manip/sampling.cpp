#include "pred/manip/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include <nlohmann/json.hpp>

#include "pred/cloze.hpp"
#include "pred/error.hpp"

namespace pred::manip {

namespace {

lm::TokenId draw(const lm::TokenDistribution& dist, Rng& rng) {
  const double u = rng.uniform();
  double acc = 0.0;
  lm::TokenId last = 0;
  for (std::size_t i = 0; i < dist.size(); ++i) {
    const double p = std::exp(dist.logprobs[i]);
    if (p <= 0.0) continue;
    acc += p;
    last = static_cast<lm::TokenId>(i);
    if (u < acc) return last;
  }
  // u landed in the rounding gap above the cumulative sum.
  return last;
}

}  // namespace

int SampleSet::count(std::string_view word) const {
  const std::string w = normalize_response(word);
  return static_cast<int>(std::count(samples.begin(), samples.end(), w));
}

std::string sample_word(const lm::DistributionProvider& provider,
                        std::span<const lm::TokenId> prefix, Rng& rng) {
  const auto& vocab = provider.vocab();
  std::vector<lm::TokenId> seq(prefix.begin(), prefix.end());
  std::string word;
  for (int step = 0; step < 4; ++step) {
    const lm::TokenId t = draw(provider.next_distribution(seq), rng);
    if (step > 0 && vocab.is_boundary(t)) break;
    if (step == 3) break;
    word += vocab.token(t);
    seq.push_back(t);
  }
  return normalize_response(lm::strip_leading_marker(word));
}

SampleSet sample_words(const lm::DistributionProvider& provider,
                       std::span<const lm::TokenId> prefix, const ContextId& context,
                       int n, std::uint64_t seed) {
  if (n < 1) throw DomainError("sample count must be at least 1");
  Rng rng(seed);
  SampleSet out{context, seed, {}};
  out.samples.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) out.samples.push_back(sample_word(provider, prefix, rng));
  return out;
}

double h1_probability(const SampleSet& samples, std::string_view word, int smoothing) {
  if (samples.samples.empty()) throw DomainError("empty sample set");
  return cloze::smoothed_probability(samples.count(word), static_cast<int>(samples.size()), smoothing);
}

std::vector<SampleSet> read_sample_sets(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open sample file " + path.string());
  std::vector<SampleSet> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const auto rec = nlohmann::json::parse(line);
      const auto& c = rec.at("context");
      SampleSet s;
      s.context = {c.at("item").get<std::string>(), c.at("sentence").get<std::string>(),
                   c.at("word_index").get<int>()};
      s.seed = rec.value("seed", std::uint64_t{0});
      for (const auto& w : rec.at("samples")) s.samples.push_back(normalize_response(w.get<std::string>()));
      if (s.samples.empty()) throw IntegrityError("empty sample list for " + to_string(s.context));
      out.push_back(std::move(s));
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(path.string() + ": " + e.what(), lineno);
    }
  }
  return out;
}

void write_sample_sets(const std::filesystem::path& path, const std::vector<SampleSet>& sets) {
  std::ofstream out(path);
  if (!out) throw OutputError("cannot write " + path.string());
  for (const auto& s : sets) {
    const nlohmann::json rec = {
        {"context", {{"item", s.context.item_id}, {"sentence", s.context.sentence_id},
                     {"word_index", s.context.word_index}}},
        {"seed", s.seed},
        {"samples", s.samples}};
    out << rec.dump() << '\n';
  }
  if (!out) throw OutputError("failed writing " + path.string());
}

}  // namespace pred::manip
