#include <sstream>

#include "gtest/gtest.h"
#include "pred/corpus.hpp"
#include "pred/csv.hpp"
#include "pred/error.hpp"
#include "pred/random.hpp"
#include "support.hpp"

namespace pred {
namespace {

using testing::TempDir;
using testing::data_dir;

StimulusCorpus fixture_corpus() { return load_stimuli(data_dir() / "stimuli.csv"); }

TEST(CsvTest, SplitsQuotedFields) {
  const auto f = csv::split_record(R"(a,"b,c","say ""hi""",)", 1);
  ASSERT_EQ(f.size(), 4u);
  EXPECT_EQ(f[1], "b,c");
  EXPECT_EQ(f[2], "say \"hi\"");
  EXPECT_EQ(f[3], "");
}

TEST(CsvTest, EscapeRoundTrips) {
  for (std::string s : {"plain", "a,b", "q\"uote", ""}) {
    const auto f = csv::split_record(csv::escape(s) + ",x", 1);
    ASSERT_EQ(f.size(), 2u);
    EXPECT_EQ(f[0], s);
  }
}

TEST(CsvTest, UnterminatedQuoteIsParseError) {
  EXPECT_THROW(csv::split_record("\"abc", 7), ParseError);
}

TEST(CsvTest, RaggedRowNamesLine) {
  std::istringstream in("a,b\n1,2\n3\n");
  try {
    csv::read(in);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
}

TEST(StimuliTest, LoadsFixture) {
  const auto corpus = fixture_corpus();
  EXPECT_EQ(corpus.items().size(), 2u);
  EXPECT_EQ(corpus.sentence_count(), 3u);
  EXPECT_EQ(corpus.word_count(), 17u);
  EXPECT_EQ(corpus.word({"A", "2", 5}).text, "book");
  EXPECT_EQ(corpus.contexts().front(), (ContextId{"A", "1", 0}));
}

TEST(StimuliTest, MinimalSentence) {
  TempDir dir;
  const auto p = dir.write("s.csv", "item_id,sentence_id,word_index,word_text\nI,S,0,a\nI,S,1,b\nI,S,2,c\n");
  const auto corpus = load_stimuli(p);
  ASSERT_EQ(corpus.items().size(), 1u);
  ASSERT_EQ(corpus.items()[0].sentences.size(), 1u);
  const auto& words = corpus.items()[0].sentences[0].words;
  ASSERT_EQ(words.size(), 3u);
  for (int i = 0; i < 3; ++i) EXPECT_EQ(words[static_cast<std::size_t>(i)].word_index, i);
}

TEST(StimuliTest, RowsMayArriveOutOfOrder) {
  TempDir dir;
  const auto p = dir.write("s.csv", "item_id,sentence_id,word_index,word_text\nI,S,2,c\nI,S,0,a\nI,S,1,b\n");
  const auto corpus = load_stimuli(p);
  EXPECT_EQ(corpus.word({"I", "S", 0}).text, "a");
  EXPECT_EQ(corpus.word({"I", "S", 2}).text, "c");
}

TEST(StimuliTest, DuplicateIndexIsIntegrityError) {
  TempDir dir;
  const auto p = dir.write("s.csv", "item_id,sentence_id,word_index,word_text\nI,S,0,a\nI,S,0,b\n");
  EXPECT_THROW(load_stimuli(p), IntegrityError);
}

TEST(StimuliTest, GapInIndicesIsIntegrityError) {
  TempDir dir;
  const auto p = dir.write("s.csv", "item_id,sentence_id,word_index,word_text\nI,S,0,a\nI,S,2,b\n");
  EXPECT_THROW(load_stimuli(p), IntegrityError);
}

TEST(StimuliTest, MalformedRowNamesLine) {
  TempDir dir;
  const auto p = dir.write("s.csv", "item_id,sentence_id,word_index,word_text\nI,S,0,a\nI,S,x,b\n");
  try {
    load_stimuli(p);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
}

TEST(StimuliTest, PrecedingWords) {
  const auto corpus = fixture_corpus();
  const auto in_sentence = corpus.preceding_words({"A", "2", 2});
  ASSERT_EQ(in_sentence.size(), 2u);
  EXPECT_EQ(in_sentence[0], "He");
  const auto in_item = corpus.preceding_words({"A", "2", 2}, true);
  EXPECT_EQ(in_item.size(), 8u);
  EXPECT_EQ(in_item.front(), "The");
  EXPECT_TRUE(corpus.preceding_words({"B", "1", 0}).empty());
}

TEST(StimuliTest, LineEdgesFollowReadingOrder) {
  const auto corpus = fixture_corpus();
  // Line 2 of item A runs from A/1/4 into the second sentence.
  EXPECT_TRUE(corpus.placement({"A", "1", 4}).line_first);
  EXPECT_FALSE(corpus.placement({"A", "1", 5}).line_last);
  EXPECT_TRUE(corpus.placement({"A", "2", 1}).line_last);
  EXPECT_TRUE(corpus.placement({"A", "2", 2}).line_first);
  EXPECT_TRUE(corpus.placement({"A", "1", 3}).line_last);
  EXPECT_FALSE(corpus.placement({"A", "1", 2}).line_last);
}

TEST(StimuliTest, UnknownContextIsReferenceError) {
  const auto corpus = fixture_corpus();
  EXPECT_THROW(corpus.word({"Z", "1", 0}), ReferenceError);
}

TEST(ClozeResponsesTest, NormalizesResponses) {
  EXPECT_EQ(normalize_response("  Old "), "old");
  EXPECT_EQ(normalize_response("warm place"), "warm");
  EXPECT_EQ(normalize_response(""), "");
}

TEST(ClozeResponsesTest, LoadsFixture) {
  const auto corpus = fixture_corpus();
  const auto cloze = load_cloze_responses(data_dir() / "cloze.jsonl", corpus);
  EXPECT_EQ(cloze.size(), 7u);
  EXPECT_EQ(cloze.count({"A", "1", 1}, "old"), 6);
  EXPECT_EQ(cloze.count({"A", "1", 1}, "OLD"), 6);
  EXPECT_EQ(cloze.total({"A", "1", 1}), 9);
  EXPECT_EQ(cloze.count({"B", "1", 2}, "warm"), 4);
  EXPECT_EQ(cloze.count({"B", "1", 2}, "hot"), 0);
  EXPECT_TRUE(cloze.has_raw_responses());
  EXPECT_THROW(cloze.total({"A", "1", 0}), MissingContextError);
}

TEST(ClozeResponsesTest, ResponsesExpandCounts) {
  ClozeResponseSet set;
  set.add({"I", "S", 1}, {"b", "a", "b"});
  EXPECT_EQ(set.responses({"I", "S", 1}), (std::vector<std::string>{"a", "b", "b"}));
}

TEST(ClozeResponsesTest, UnknownContextIsReferenceError) {
  TempDir dir;
  const auto p = dir.write("c.jsonl", R"({"item_id":"Q","sentence_id":"1","word_index":0,"responses":["x"]})" "\n");
  EXPECT_THROW(load_cloze_responses(p, fixture_corpus()), ReferenceError);
}

TEST(ClozeResponsesTest, EmptyListIsIntegrityError) {
  TempDir dir;
  const auto p = dir.write("c.jsonl", R"({"item_id":"A","sentence_id":"1","word_index":1,"responses":[]})" "\n");
  EXPECT_THROW(load_cloze_responses(p, fixture_corpus()), IntegrityError);
}

TEST(ClozeResponsesTest, AggregatedFlagClearsRaw) {
  TempDir dir;
  const auto p = dir.write(
      "c.jsonl", R"({"item_id":"A","sentence_id":"1","word_index":1,"responses":["old"],"raw":false})" "\n");
  EXPECT_FALSE(load_cloze_responses(p, fixture_corpus()).has_raw_responses());
}

TEST(MeasureTest, ParsesAnyCase) {
  EXPECT_EQ(parse_measure("spr"), Measure::kSPR);
  EXPECT_EQ(parse_measure("Gp"), Measure::kGP);
  EXPECT_EQ(to_string(Measure::kFP), "FP");
  EXPECT_THROW(parse_measure("TRT"), ParseError);
}

TEST(RtTest, LoadsFortyRows) {
  const auto corpus = fixture_corpus();
  const auto rt = load_rt_data(data_dir() / "rt_spr.csv", corpus, Measure::kSPR);
  ASSERT_EQ(rt.size(), 40u);
  EXPECT_EQ(rt[0].subject_id, "S1");
  EXPECT_DOUBLE_EQ(rt[0].rt, 250.0);
  EXPECT_EQ(rt[0].trial_correct, true);
}

TEST(RtTest, FilterDropsEdgesOutliersAndErrors) {
  const auto corpus = fixture_corpus();
  const auto rt = load_rt_data(data_dir() / "rt_spr.csv", corpus, Measure::kSPR);
  const auto kept = filter_rt(rt, corpus);
  // 3 edge words per subject, one RT above 3000 ms, one incorrect trial.
  EXPECT_EQ(kept.size(), 40u - 12u - 2u);
  for (const auto& o : kept) {
    const auto& p = corpus.placement(o.context);
    EXPECT_FALSE(p.sentence_first || p.sentence_last || p.line_first || p.line_last);
    EXPECT_LE(o.rt, 3000.0);
  }
}

TEST(RtTest, FilterSwitches) {
  const auto corpus = fixture_corpus();
  const auto rt = load_rt_data(data_dir() / "rt_spr.csv", corpus, Measure::kSPR);
  FilterConfig keep_all;
  keep_all.drop_sentence_edges = false;
  keep_all.drop_line_edges = false;
  keep_all.drop_incorrect_trials = false;
  keep_all.spr_max_ms = 1e9;
  EXPECT_EQ(filter_rt(rt, corpus, keep_all).size(), 40u);
  FilterConfig lines_only = keep_all;
  lines_only.drop_line_edges = true;
  // A/1/0 opens line 1, A/1/3 closes it and A/2/5 closes line 3.
  EXPECT_EQ(filter_rt(rt, corpus, lines_only).size(), 40u - 12u);
}

TEST(RtTest, FirstWordOfSentenceIsRemoved) {
  const auto corpus = fixture_corpus();
  RTObservation o{"S1", {"B", "1", 0}, Measure::kSPR, 300.0, std::nullopt, std::nullopt};
  EXPECT_TRUE(filter_rt({o}, corpus).empty());
}

TEST(RtTest, FilterPreservesOrder) {
  const auto corpus = fixture_corpus();
  const auto rt = load_rt_data(data_dir() / "rt_spr.csv", corpus, Measure::kSPR);
  const auto kept = filter_rt(rt, corpus);
  std::size_t j = 0;
  for (const auto& o : rt) {
    if (j < kept.size() && o.subject_id == kept[j].subject_id && o.context == kept[j].context) ++j;
  }
  EXPECT_EQ(j, kept.size());
}

TEST(RtTest, FirstPassThresholdIsTwoSeconds) {
  const auto corpus = fixture_corpus();
  const auto rt = load_rt_data(data_dir() / "rt_fp.csv", corpus, Measure::kFP);
  ASSERT_EQ(rt.size(), 20u);
  const auto kept = filter_rt(rt, corpus);
  EXPECT_EQ(kept.size(), 20u - 6u - 1u);
  for (const auto& o : kept) EXPECT_TRUE(o.prev_word_fixated.has_value());
}

TEST(RtTest, MeasureMismatchIsParseError) {
  EXPECT_THROW(load_rt_data(data_dir() / "rt_spr.csv", fixture_corpus(), Measure::kGP), ParseError);
}

TEST(RtTest, EyeTrackingRowsNeedPrevFixated) {
  TempDir dir;
  const auto p = dir.write("r.csv", "subject_id,item_id,sentence_id,word_index,measure,rt_ms\nS,A,1,1,FP,200\n");
  EXPECT_THROW(load_rt_data(p, fixture_corpus(), Measure::kFP), IntegrityError);
}

TEST(RtTest, NonPositiveRtIsIntegrityError) {
  TempDir dir;
  const auto p = dir.write("r.csv", "subject_id,item_id,sentence_id,word_index,measure,rt_ms\nS,A,1,1,SPR,0\n");
  EXPECT_THROW(load_rt_data(p, fixture_corpus(), Measure::kSPR), IntegrityError);
}

TEST(RtTest, UnknownContextIsReferenceError) {
  TempDir dir;
  const auto p = dir.write("r.csv", "subject_id,item_id,sentence_id,word_index,measure,rt_ms\nS,A,9,1,SPR,200\n");
  EXPECT_THROW(load_rt_data(p, fixture_corpus(), Measure::kSPR), ReferenceError);
}

// Property: with edge and outlier filtering on, every surviving word is
// sentence-internal and line-internal, for random corpora and line layouts.
TEST(RtTest, FilterPropertyOnRandomCorpora) {
  Rng rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<Item> items;
    const int n_items = 1 + static_cast<int>(rng.below(3));
    for (int i = 0; i < n_items; ++i) {
      Item item{"i" + std::to_string(i), {}};
      int pos = 0;
      const int line_len = 2 + static_cast<int>(rng.below(6));
      for (int s = 0, ns = 1 + static_cast<int>(rng.below(3)); s < ns; ++s) {
        Sentence sent{"s" + std::to_string(s), {}};
        for (int w = 0, nw = 1 + static_cast<int>(rng.below(8)); w < nw; ++w, ++pos) {
          sent.words.push_back({w, "w", "L" + std::to_string(pos / line_len)});
        }
        item.sentences.push_back(std::move(sent));
      }
      items.push_back(std::move(item));
    }
    const StimulusCorpus corpus(items);
    std::vector<RTObservation> obs;
    for (const auto& c : corpus.contexts()) {
      obs.push_back({"p", c, Measure::kSPR, 100.0 + 4000.0 * rng.uniform(), std::nullopt, std::nullopt});
    }
    for (const auto& o : filter_rt(obs, corpus)) {
      const auto& p = corpus.placement(o.context);
      const int last = static_cast<int>(corpus.sentence_of(o.context).words.size()) - 1;
      EXPECT_GT(o.context.word_index, 0);
      EXPECT_LT(o.context.word_index, last);
      EXPECT_FALSE(p.line_first || p.line_last);
      EXPECT_LE(o.rt, 3000.0);
    }
  }
}

}  // namespace
}  // namespace pred
