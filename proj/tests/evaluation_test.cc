#include "eigenthemes/evaluation.h"

#include <cmath>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "gtest/gtest.h"
#include "eigenthemes/errors.h"
#include "synth_harness.h"
#include "test_util.h"

namespace eigenthemes {
namespace {

using testing_util::KindOf;
using testing_util::PreparedSynth;
using testing_util::Unweighted;

MentionOutcome Outcome(Bucket bucket, bool correct,
                       std::optional<size_t> rank = std::nullopt) {
  MentionOutcome o;
  o.doc_id = "d";
  o.gold_qid = "gold";
  o.bucket = bucket;
  o.predicted_qid = correct ? "gold" : "other";
  o.rank_of_gold = rank;
  return o;
}

TEST(ClassifyTest, Buckets) {
  CandidateList list;
  for (int i = 0; i < 20; ++i) list.candidates.push_back("q" + std::to_string(i));
  EXPECT_EQ(Classify(list, "q0"), Bucket::kEasy);
  EXPECT_EQ(Classify(list, "q4"), Bucket::kHard);
  EXPECT_EQ(Classify(list, "q20"), Bucket::kNotFound);
  EXPECT_EQ(Classify(CandidateList{}, "q0"), Bucket::kNotFound);
}

TEST(ClassifyTest, TruncationMovesHardToNotFound) {
  EntityCatalog catalog;
  std::vector<std::string> qids;
  for (int i = 0; i < 30; ++i) {
    qids.push_back("q" + std::to_string(100 + i));
    catalog.Add({qids.back(), "Name", {}, 1000 - i});
  }
  CandidateList all = RankByDegree("Name", qids, catalog, kUnlimitedCandidates);
  CandidateList top = RankByDegree("Name", qids, catalog, 20);
  EXPECT_EQ(Classify(all, "q125"), Bucket::kHard);
  EXPECT_EQ(Classify(top, "q125"), Bucket::kNotFound);
}

TEST(BucketNameTest, RoundTrip) {
  for (Bucket b : {Bucket::kEasy, Bucket::kHard, Bucket::kNotFound}) {
    EXPECT_EQ(ParseBucket(BucketName(b)), b);
  }
  EXPECT_EQ(KindOf([] { ParseBucket("medium"); }), ErrorKind::kParse);
}

TEST(PrecisionAtOneTest, Examples) {
  std::vector<MentionOutcome> all_correct{Outcome(Bucket::kEasy, true, 1),
                                          Outcome(Bucket::kHard, true, 1)};
  EXPECT_EQ(PrecisionAtOne(all_correct, BucketSelector::kOverall), 1.0);

  std::vector<MentionOutcome> only_missing{Outcome(Bucket::kNotFound, false),
                                           Outcome(Bucket::kNotFound, false)};
  EXPECT_EQ(PrecisionAtOne(only_missing, BucketSelector::kOverall), 0.0);
  EXPECT_EQ(PrecisionAtOne(only_missing, BucketSelector::kEasy), 0.0);
}

TEST(PrecisionAtOneTest, TenMentionFixture) {
  std::vector<MentionOutcome> outcomes;
  for (int i = 0; i < 4; ++i) outcomes.push_back(Outcome(Bucket::kEasy, true, 1));
  outcomes.push_back(Outcome(Bucket::kEasy, false, 2));
  for (int i = 0; i < 2; ++i) outcomes.push_back(Outcome(Bucket::kHard, true, 1));
  outcomes.push_back(Outcome(Bucket::kHard, false, 3));
  outcomes.push_back(Outcome(Bucket::kNotFound, false));
  outcomes.push_back(Outcome(Bucket::kNotFound, false));
  EXPECT_DOUBLE_EQ(PrecisionAtOne(outcomes, BucketSelector::kOverall), 0.6);
  EXPECT_DOUBLE_EQ(PrecisionAtOne(outcomes, BucketSelector::kEasy), 0.8);
  EXPECT_DOUBLE_EQ(PrecisionAtOne(outcomes, BucketSelector::kHard), 2.0 / 3.0);
}

TEST(MeanReciprocalRankTest, Examples) {
  std::vector<MentionOutcome> second{Outcome(Bucket::kHard, false, 2),
                                     Outcome(Bucket::kEasy, false, 2)};
  EXPECT_DOUBLE_EQ(MeanReciprocalRank(second, BucketSelector::kOverall), 0.5);

  std::vector<MentionOutcome> mixed{Outcome(Bucket::kEasy, true, 1),
                                    Outcome(Bucket::kHard, false, 2),
                                    Outcome(Bucket::kHard, false, 4),
                                    Outcome(Bucket::kNotFound, false)};
  EXPECT_DOUBLE_EQ(MeanReciprocalRank(mixed, BucketSelector::kOverall), 0.4375);
  EXPECT_DOUBLE_EQ(MeanReciprocalRank(mixed, BucketSelector::kHard), 0.375);
}

TEST(ScoreGapTest, EqualScoresGiveZeroGap) {
  MentionOutcome o = Outcome(Bucket::kHard, true, 1);
  o.gold_score = 0.5;
  o.other_scores = {0.5, 0.5};
  std::vector<MentionOutcome> outcomes(5, o);
  ScoreGapResult gap = ScoreGap(outcomes, 1, 1000);
  EXPECT_EQ(gap.mentions, 5u);
  EXPECT_DOUBLE_EQ(gap.mean, 0.0);
  EXPECT_DOUBLE_EQ(gap.ci_low, 0.0);
  EXPECT_DOUBLE_EQ(gap.ci_high, 0.0);
}

TEST(ScoreGapTest, Exclusions) {
  MentionOutcome single = Outcome(Bucket::kEasy, true, 1);
  single.gold_score = 1.0;
  MentionOutcome missing = Outcome(Bucket::kNotFound, false);
  missing.other_scores = {1.0};
  MentionOutcome unscored = Outcome(Bucket::kHard, false, 2);
  unscored.other_scores = {1.0};
  MentionOutcome infinite = Outcome(Bucket::kHard, true, 1);
  infinite.gold_score = 1.0;
  infinite.other_scores = {-std::numeric_limits<double>::infinity()};
  MentionOutcome zero = Outcome(Bucket::kHard, true, 1);
  zero.gold_score = 1.0;
  zero.other_scores = {0.0};
  std::vector<MentionOutcome> outcomes{single, missing, unscored, infinite,
                                       zero};
  EXPECT_EQ(ScoreGap(outcomes, 3).mentions, 0u);
}

TEST(ScoreGapTest, HandComputedMeanAndSeededInterval) {
  std::vector<MentionOutcome> outcomes;
  for (double g : {2.0, 3.0, 1.5, 4.0}) {
    MentionOutcome o = Outcome(Bucket::kHard, true, 1);
    o.gold_score = g;
    o.other_scores = {0.5, 1.5};
    outcomes.push_back(o);
  }
  ScoreGapResult a = ScoreGap(outcomes, 42);
  EXPECT_DOUBLE_EQ(a.mean, (1.0 + 2.0 + 0.5 + 3.0) / 4.0);
  EXPECT_LE(a.ci_low, a.mean);
  EXPECT_GE(a.ci_high, a.mean);
  EXPECT_GE(a.ci_low, 0.5);
  EXPECT_LE(a.ci_high, 3.0);
  ScoreGapResult b = ScoreGap(outcomes, 42);
  EXPECT_EQ(a.ci_low, b.ci_low);
  EXPECT_EQ(a.ci_high, b.ci_high);
}

TEST(PredictionsCsvTest, HeaderAndRoundTrip) {
  MentionOutcome a = Outcome(Bucket::kHard, false, 3);
  a.doc_id = "doc,1";
  a.surface = "He said \"hi\"";
  a.predicted_score = 0.1;
  MentionOutcome b = Outcome(Bucket::kNotFound, false);
  b.predicted_qid.reset();
  b.mention_index = 7;
  std::vector<MentionOutcome> outcomes{a, b};
  std::stringstream buffer;
  WritePredictionsCsv(outcomes, buffer);
  const std::string header = buffer.str().substr(0, buffer.str().find('\n'));
  EXPECT_EQ(header,
            "doc_id,mention_idx,surface,gold_qid,predicted_qid,bucket,"
            "rank_of_gold,score");
  std::vector<MentionOutcome> back = ReadPredictionsCsv(buffer);
  ASSERT_EQ(back.size(), 2u);
  EXPECT_EQ(back[0].doc_id, "doc,1");
  EXPECT_EQ(back[0].surface, "He said \"hi\"");
  EXPECT_EQ(back[0].rank_of_gold, 3u);
  EXPECT_EQ(*back[0].predicted_score, 0.1);
  EXPECT_EQ(back[1].bucket, Bucket::kNotFound);
  EXPECT_FALSE(back[1].predicted_qid);
  EXPECT_FALSE(back[1].rank_of_gold);
  EXPECT_EQ(back[1].mention_index, 7u);
}

TEST(PredictionsCsvTest, RejectsWrongHeader) {
  std::istringstream in("a,b,c\n");
  EXPECT_EQ(KindOf([&] { ReadPredictionsCsv(in); }), ErrorKind::kFormat);
}

TEST(EvaluateDocumentsTest, InvariantsOnSynthCorpus) {
  SynthConfig config;
  config.docs = 12;
  config.not_found_fraction = 0.1;
  PreparedSynth synth(config);
  const OutcomeSet eigen = synth.Evaluate(Unweighted(Method::kEigen));
  const OutcomeSet degree = synth.Evaluate(Unweighted(Method::kDegree));
  const OutcomeSet avg = synth.Evaluate(Unweighted(Method::kAvg));
  ASSERT_EQ(eigen.outcomes.size(), degree.outcomes.size());
  for (size_t i = 0; i < eigen.outcomes.size(); ++i) {
    EXPECT_EQ(eigen.outcomes[i].bucket, degree.outcomes[i].bucket);
    EXPECT_EQ(avg.outcomes[i].bucket, degree.outcomes[i].bucket);
    EXPECT_EQ(eigen.outcomes[i].rank_of_gold.has_value(),
              eigen.outcomes[i].bucket != Bucket::kNotFound);
  }
  for (const OutcomeSet* set : {&eigen, &degree, &avg}) {
    MetricsReport report = Summarize(*set);
    EXPECT_LE(report.overall.precision_at_1, report.oracle_recall + 1e-15);
    for (const BucketMetrics* m : {&report.easy, &report.hard, &report.overall}) {
      EXPECT_GE(m->mrr, m->precision_at_1);
    }
    EXPECT_EQ(report.easy.count + report.hard.count + report.not_found,
              report.overall.count);
  }
}

TEST(EvaluateDocumentsTest, UnannotatedMentionsAreExcluded) {
  DocumentTask doc;
  doc.doc_id = "d";
  MentionTask m;
  m.candidates.candidates = {"a"};
  doc.mentions = {m, m};
  doc.mentions[1].gold_qid = "a";
  LinkResult r;
  r.mentions.resize(2);
  r.mentions[1].predicted = "a";
  r.mentions[1].ranking = {{"a", 1.0}};
  OutcomeSet set = EvaluateDocuments({doc}, {r});
  EXPECT_EQ(set.excluded_unannotated, 1u);
  ASSERT_EQ(set.outcomes.size(), 1u);
  EXPECT_EQ(set.outcomes[0].mention_index, 1u);
  EXPECT_TRUE(set.outcomes[0].correct());
}

TEST(MutilationTest, EndpointsAndDeterminism) {
  SynthConfig config;
  config.docs = 10;
  PreparedSynth synth(config);
  std::vector<CorpusLinker> linkers{synth.Linker(Unweighted(Method::kEigen)),
                                    synth.Linker(Unweighted(Method::kDegree))};
  std::vector<double> fractions{1.0, 0.5, 0.0};
  auto points = Mutilation(synth.corpus.docs, fractions, 5, 4, linkers);
  ASSERT_EQ(points.size(), 3u);

  const double plain_eigen = PrecisionAtOne(
      synth.Evaluate(Unweighted(Method::kEigen)).outcomes,
      BucketSelector::kOverall);
  const double plain_degree = PrecisionAtOne(
      synth.Evaluate(Unweighted(Method::kDegree)).outcomes,
      BucketSelector::kOverall);
  EXPECT_EQ(points[0].mean_overall_p_at_1[0], plain_eigen);
  EXPECT_EQ(points[0].mean_overall_p_at_1[1], plain_degree);
  EXPECT_EQ(points[0].easy_kept, points[0].easy_total);
  EXPECT_EQ(points[2].easy_kept, 0u);
  EXPECT_EQ(points[2].mean_overall_p_at_1[1], 0.0);
  EXPECT_EQ(points[1].easy_kept, 16u);

  auto again = Mutilation(synth.corpus.docs, fractions, 5, 4, linkers);
  for (size_t i = 0; i < points.size(); ++i) {
    EXPECT_EQ(points[i].mean_overall_p_at_1, again[i].mean_overall_p_at_1);
  }
}

TEST(MutilationTest, RejectsBadArguments) {
  std::vector<DocumentTask> docs;
  std::vector<CorpusLinker> none;
  std::vector<double> bad{1.5};
  EXPECT_EQ(KindOf([&] { Mutilation(docs, bad, 1, 1, none); }),
            ErrorKind::kDomain);
  std::vector<double> ok{1.0};
  EXPECT_EQ(KindOf([&] { Mutilation(docs, ok, 1, 0, none); }),
            ErrorKind::kDomain);
}

TEST(MutilationTest, EigenAndDegreeCurvesCross) {
  SynthConfig config;
  config.docs = 20;
  config.easy_fraction = 0.9;
  config.noise = 1.0;
  PreparedSynth synth(config);
  std::vector<CorpusLinker> linkers{synth.Linker(Unweighted(Method::kEigen)),
                                    synth.Linker(Unweighted(Method::kDegree))};
  std::vector<double> fractions{1.0, 0.8, 0.6, 0.4, 0.2, 0.0};
  auto points = Mutilation(synth.corpus.docs, fractions, 11, 3, linkers);
  const auto& first = points.front().mean_overall_p_at_1;
  const auto& last = points.back().mean_overall_p_at_1;
  EXPECT_GT(first[1], first[0]) << "degree should lead with all easy mentions";
  EXPECT_GT(last[0], last[1]) << "eigen should lead with no easy mentions";
  for (size_t i = 1; i < points.size(); ++i) {
    EXPECT_LE(points[i].mean_overall_p_at_1[1],
              points[i - 1].mean_overall_p_at_1[1] + 1e-12);
  }
}

}  // namespace
}  // namespace eigenthemes
