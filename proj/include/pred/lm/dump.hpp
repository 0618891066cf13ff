#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <vector>

#include "pred/corpus.hpp"
#include "pred/lm/provider.hpp"

namespace pred::lm {

// Contents of a PDLM distribution dump.
//
// Line 1 is a JSON header
//   {"magic":"PDLM","version":1,"vocab":[...],"dim_v":V,
//    "segmentation":{"word":[ids...]}, "eos":"<|endoftext|>"}
// and every following line is one row, keyed either by corpus context or by
// an explicit token prefix:
//   {"context":{"item":..,"sentence":..,"word_index":..},"logprobs":"<b64>"}
//   {"prefix":[ids...],"logprobs":"<b64>"}
// where logprobs packs V little-endian float32 values (nats).
struct DistributionDump {
  Segmentation segmentation;
  std::map<ContextId, TokenDistribution> by_context;
  std::map<std::vector<TokenId>, TokenDistribution> by_prefix;

  const TokenVocab& vocab() const { return segmentation.vocab(); }
};

// Rows within 1e-5 of normalized are kept as stored, rows within 1e-3 are
// renormalized, anything else raises IntegrityError. Header or row syntax
// problems raise FormatError. When `corpus` is given, context rows must
// resolve in it (ReferenceError otherwise).
DistributionDump load_distribution_dump(const std::filesystem::path& path,
                                        const StimulusCorpus* corpus = nullptr);

// Values are written as float32; reading back yields the same float32 values.
void write_distribution_dump(const std::filesystem::path& path, const DistributionDump& dump);

// Serves stored rows. Prefixes missing from the dump raise CoverageError.
class ReplayProvider final : public DistributionProvider {
 public:
  explicit ReplayProvider(DistributionDump dump) : dump_(std::move(dump)) {}

  const Segmentation& segmentation() const override { return dump_.segmentation; }
  TokenDistribution next_distribution(std::span<const TokenId> prefix) const override;
  // Row stored under a corpus context. Throws CoverageError.
  const TokenDistribution& distribution_for(const ContextId& id) const;

  const DistributionDump& dump() const { return dump_; }

 private:
  DistributionDump dump_;
};

std::unique_ptr<ReplayProvider> replay_provider(DistributionDump dump);

// Captures every distribution that word-level scoring of the corpus needs:
// for each context, the prefix itself and the prefix extended by each token
// of the word.
DistributionDump capture_corpus_dump(const DistributionProvider& provider,
                                     const StimulusCorpus& corpus, bool whole_item = false);

}  // namespace pred::lm
