#include "pred/lm/toy_provider.hpp"

#include <cmath>
#include <fstream>

#include <nlohmann/json.hpp>

#include "pred/error.hpp"
#include "pred/random.hpp"

namespace pred::lm {

namespace {

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

TokenDistribution checked_row(const std::vector<double>& probs, std::size_t size) {
  if (probs.size() != size) throw DomainError("toy row has the wrong length");
  double total = 0.0;
  for (double p : probs) {
    if (!(p > 0.0) || !std::isfinite(p)) throw DomainError("toy row entries must be positive");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-9) throw DomainError("toy row is not normalized");
  TokenDistribution d;
  for (double p : probs) d.logprobs.push_back(std::log(p));
  return d;
}

}  // namespace

ToyProvider::ToyProvider(Segmentation segmentation, Options options)
    : segmentation_(std::move(segmentation)), options_(std::move(options)) {
  const std::size_t v = vocab().size();
  if (v == 0 || v > kToyVocabLimit) {
    throw DomainError("toy vocabulary must have 1.." + std::to_string(kToyVocabLimit) + " tokens");
  }
  if (options_.order < 1) throw DomainError("n-gram order must be at least 1");
  for (const auto& [ctx, probs] : options_.rows) {
    if (ctx.size() != static_cast<std::size_t>(options_.order - 1)) {
      throw DomainError("toy row context length must be order - 1");
    }
    rows_.emplace(ctx, checked_row(probs, v));
  }
  if (options_.fallback.empty()) options_.fallback.assign(v, 1.0 / static_cast<double>(v));
  fallback_ = checked_row(options_.fallback, v);
}

std::vector<TokenId> ToyProvider::context_key(std::span<const TokenId> prefix) const {
  const auto n = static_cast<std::size_t>(options_.order - 1);
  std::vector<TokenId> key(n, -1);
  const std::size_t take = std::min(n, prefix.size());
  for (std::size_t i = 0; i < take; ++i) key[n - take + i] = prefix[prefix.size() - take + i];
  return key;
}

TokenDistribution ToyProvider::next_distribution(std::span<const TokenId> prefix) const {
  for (TokenId t : prefix) vocab().token(t);
  const auto key = context_key(prefix);
  if (auto it = rows_.find(key); it != rows_.end()) return it->second;
  if (!options_.seed) return fallback_;

  std::uint64_t h = splitmix(*options_.seed);
  for (TokenId t : key) h = splitmix(h ^ static_cast<std::uint64_t>(static_cast<std::int64_t>(t)));
  Rng rng(h);
  std::vector<double> logits(vocab().size());
  for (double& l : logits) l = options_.concentration * rng.normal();
  const double lse = logsumexp(logits);
  for (double& l : logits) l -= lse;
  return TokenDistribution{std::move(logits)};
}

ToyProvider uniform_toy_provider(Segmentation segmentation) {
  return ToyProvider(std::move(segmentation), {});
}

ToyProvider seeded_toy_provider(Segmentation segmentation, std::uint64_t seed, int order,
                                double concentration) {
  ToyProvider::Options opt;
  opt.order = order;
  opt.seed = seed;
  opt.concentration = concentration;
  return ToyProvider(std::move(segmentation), std::move(opt));
}

std::unique_ptr<ToyProvider> load_toy_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open toy model " + path.string());
  try {
    const auto spec = nlohmann::json::parse(in);
    std::optional<std::string> eos = std::string(kDefaultEos);
    if (spec.contains("eos")) {
      eos = spec["eos"].is_null() ? std::nullopt : std::optional(spec["eos"].get<std::string>());
    }
    auto vocab = std::make_shared<const TokenVocab>(spec.at("vocab").get<std::vector<std::string>>(), eos);
    std::map<std::string, std::vector<TokenId>> table;
    if (spec.contains("segmentation")) {
      table = spec["segmentation"].get<std::map<std::string, std::vector<TokenId>>>();
    }
    ToyProvider::Options opt;
    opt.order = spec.value("order", 2);
    if (spec.contains("seed")) opt.seed = spec["seed"].get<std::uint64_t>();
    opt.concentration = spec.value("concentration", 1.0);
    if (spec.contains("rows")) {
      for (const auto& r : spec["rows"]) {
        opt.rows.emplace(r.at("context").get<std::vector<TokenId>>(),
                         r.at("probs").get<std::vector<double>>());
      }
    }
    return std::make_unique<ToyProvider>(Segmentation(vocab, std::move(table)), std::move(opt));
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("malformed toy model " + path.string() + ": " + e.what());
  }
}

}  // namespace pred::lm
