#include "pred/lm/dump.hpp"

#include <cmath>
#include <fstream>

#include <nlohmann/json.hpp>

#include "pred/error.hpp"
#include "pred/lm/base64.hpp"
#include "pred/lm/word_probability.hpp"

namespace pred::lm {

namespace {

using nlohmann::json;

std::string prefix_string(std::span<const TokenId> prefix) {
  std::string s = "[";
  for (std::size_t i = 0; i < prefix.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(prefix[i]);
  }
  return s + "]";
}

TokenDistribution decode_row(const std::string& payload, std::size_t dim, std::size_t line_no) {
  std::vector<float> values;
  try {
    values = decode_f32(payload);
  } catch (const FormatError& e) {
    throw FormatError(std::string(e.what()) + " (line " + std::to_string(line_no) + ")");
  }
  if (values.size() != dim) {
    throw FormatError("row has " + std::to_string(values.size()) + " log-probabilities, expected " +
                      std::to_string(dim) + " (line " + std::to_string(line_no) + ")");
  }
  TokenDistribution d;
  d.logprobs.assign(values.begin(), values.end());
  for (double v : d.logprobs) {
    if (std::isnan(v) || v > 0.0) {
      throw IntegrityError("invalid log-probability (line " + std::to_string(line_no) + ")");
    }
  }
  const double lse = logsumexp(d.logprobs);
  if (!std::isfinite(lse) || std::abs(lse) > 1e-3) {
    throw IntegrityError("row is not normalized (logsumexp " + std::to_string(lse) + ", line " +
                         std::to_string(line_no) + ")");
  }
  if (std::abs(lse) > 1e-5) {
    for (double& v : d.logprobs) v -= lse;
  }
  return d;
}

}  // namespace

DistributionDump load_distribution_dump(const std::filesystem::path& path,
                                        const StimulusCorpus* corpus) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw FormatError("empty dump file");

  json header;
  try {
    header = json::parse(line);
  } catch (const json::exception& e) {
    throw FormatError(std::string("unreadable dump header: ") + e.what());
  }
  if (!header.is_object() || header.value("magic", "") != "PDLM") throw FormatError("bad magic");
  if (header.value("version", 0) != 1) throw FormatError("unsupported dump version");

  std::shared_ptr<const TokenVocab> vocab;
  std::map<std::string, std::vector<TokenId>> table;
  std::size_t dim = 0;
  try {
    std::optional<std::string> eos = std::string(kDefaultEos);
    if (header.contains("eos")) {
      eos = header["eos"].is_null() ? std::nullopt
                                    : std::optional(header["eos"].get<std::string>());
    }
    vocab = std::make_shared<const TokenVocab>(header.at("vocab").get<std::vector<std::string>>(), eos);
    dim = header.at("dim_v").get<std::size_t>();
    if (header.contains("segmentation")) {
      table = header["segmentation"].get<std::map<std::string, std::vector<TokenId>>>();
    }
  } catch (const json::exception& e) {
    throw FormatError(std::string("malformed dump header: ") + e.what());
  }
  if (dim != vocab->size()) throw FormatError("dim_v does not match the vocabulary size");

  DistributionDump dump{Segmentation(vocab, std::move(table)), {}, {}};
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    json row;
    try {
      row = json::parse(line);
    } catch (const json::exception& e) {
      throw FormatError("unreadable row (line " + std::to_string(line_no) + "): " + e.what());
    }
    try {
      TokenDistribution d = decode_row(row.at("logprobs").get<std::string>(), dim, line_no);
      if (row.contains("context")) {
        const auto& c = row["context"];
        ContextId id{c.at("item").get<std::string>(), c.at("sentence").get<std::string>(),
                     c.at("word_index").get<int>()};
        if (corpus && !corpus->contains(id)) {
          throw ReferenceError("dump row references unknown context " + to_string(id));
        }
        dump.by_context.insert_or_assign(id, std::move(d));
      } else {
        auto prefix = row.at("prefix").get<std::vector<TokenId>>();
        for (TokenId t : prefix) {
          if (t < 0 || static_cast<std::size_t>(t) >= dim) {
            throw FormatError("prefix token out of range (line " + std::to_string(line_no) + ")");
          }
        }
        dump.by_prefix.insert_or_assign(std::move(prefix), std::move(d));
      }
    } catch (const json::exception& e) {
      throw FormatError("malformed row (line " + std::to_string(line_no) + "): " + e.what());
    }
  }
  return dump;
}

void write_distribution_dump(const std::filesystem::path& path, const DistributionDump& dump) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw OutputError("cannot write " + path.string());
  const TokenVocab& vocab = dump.vocab();
  json header = {{"magic", "PDLM"},
                 {"version", 1},
                 {"vocab", vocab.tokens()},
                 {"dim_v", vocab.size()},
                 {"segmentation", dump.segmentation.table()}};
  header["eos"] = vocab.eos_token() ? json(*vocab.eos_token()) : json(nullptr);
  out << header.dump() << '\n';

  auto payload = [](const TokenDistribution& d) {
    std::vector<float> f(d.logprobs.begin(), d.logprobs.end());
    return encode_f32(f);
  };
  for (const auto& [id, d] : dump.by_context) {
    json row = {{"context", {{"item", id.item_id}, {"sentence", id.sentence_id}, {"word_index", id.word_index}}},
                {"logprobs", payload(d)}};
    out << row.dump() << '\n';
  }
  for (const auto& [prefix, d] : dump.by_prefix) {
    json row = {{"prefix", prefix}, {"logprobs", payload(d)}};
    out << row.dump() << '\n';
  }
  if (!out) throw OutputError("failed writing " + path.string());
}

TokenDistribution ReplayProvider::next_distribution(std::span<const TokenId> prefix) const {
  auto it = dump_.by_prefix.find(std::vector<TokenId>(prefix.begin(), prefix.end()));
  if (it == dump_.by_prefix.end()) {
    throw CoverageError("dump has no distribution for prefix " + prefix_string(prefix));
  }
  return it->second;
}

const TokenDistribution& ReplayProvider::distribution_for(const ContextId& id) const {
  auto it = dump_.by_context.find(id);
  if (it == dump_.by_context.end()) {
    throw CoverageError("dump has no distribution for context " + to_string(id));
  }
  return it->second;
}

std::unique_ptr<ReplayProvider> replay_provider(DistributionDump dump) {
  return std::make_unique<ReplayProvider>(std::move(dump));
}

DistributionDump capture_corpus_dump(const DistributionProvider& provider,
                                     const StimulusCorpus& corpus, bool whole_item) {
  DistributionDump dump{provider.segmentation(), {}, {}};
  for (const ContextId& id : corpus.contexts()) {
    std::vector<TokenId> prefix = context_prefix(corpus, id, provider.segmentation(), whole_item);
    TokenDistribution at_context = provider.next_distribution(prefix);
    dump.by_context.emplace(id, at_context);
    dump.by_prefix.emplace(prefix, std::move(at_context));
    for (TokenId t : provider.segmentation().segment(corpus.word(id).text)) {
      prefix.push_back(t);
      if (!dump.by_prefix.contains(prefix)) {
        dump.by_prefix.emplace(prefix, provider.next_distribution(prefix));
      }
    }
  }
  return dump;
}

}  // namespace pred::lm
