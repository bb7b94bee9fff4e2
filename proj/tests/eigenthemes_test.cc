#include "eigenthemes/eigenthemes.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "gtest/gtest.h"
#include "eigenthemes/errors.h"
#include "oracles.h"
#include "test_util.h"

namespace eigenthemes {
namespace {

using testing_util::KindOf;
using testing_util::RandomUnit;

constexpr WeightScheme kUnweighted{WeightKind::kNone, 1.0};

MentionTask Mention(const std::string& surface,
                    std::vector<std::string> candidates,
                    std::optional<std::string> gold = std::nullopt) {
  MentionTask m;
  m.surface = surface;
  m.gold_qid = std::move(gold);
  m.candidates.mention_surface = surface;
  m.candidates.candidates = std::move(candidates);
  return m;
}

std::string Qid(int i) { return "e" + std::to_string(i); }

std::vector<std::string> Range(int begin, int end) {
  std::vector<std::string> out;
  for (int i = begin; i < end; ++i) out.push_back(Qid(i));
  return out;
}

TEST(BuildDocumentMatrixTest, SharedCandidateAppearsOnce) {
  EmbeddingStore store(2);
  store.Add("q1", std::vector<double>{1, 0});
  store.Add("q5", std::vector<double>{0, 2});
  store.Add("q9", std::vector<double>{1, 1});
  DocumentTask doc;
  doc.mentions = {Mention("a", {"q1", "q5"}), Mention("b", {"q5", "q9"})};
  DocumentMatrix dm = BuildDocumentMatrix(doc, store, kUnweighted);
  EXPECT_EQ(dm.entity_ids, (std::vector<std::string>{"q1", "q5", "q9"}));
  EXPECT_EQ(dm.weights, (std::vector<double>{1.0, 1.0, 1.0}));
  for (size_t r = 0; r < dm.size(); ++r) {
    EXPECT_NEAR(L2Norm(dm.matrix.row(r)), 1.0, 1e-15);
  }
}

TEST(BuildDocumentMatrixTest, SharedCandidateKeepsLargestWeight) {
  EmbeddingStore store(2);
  store.Add("q1", std::vector<double>{1, 0});
  store.Add("q5", std::vector<double>{0, 1});
  DocumentTask doc;
  doc.mentions = {Mention("a", {"q1", "q5"}), Mention("b", {"q5"})};
  DocumentMatrix dm =
      BuildDocumentMatrix(doc, store, {WeightKind::kDegreeRr, 1.0});
  EXPECT_EQ(dm.weights, (std::vector<double>{1.0, 1.0}));
}

TEST(BuildDocumentMatrixTest, UnionOfThreeMentionsWithOverlap) {
  std::mt19937_64 rng(1);
  EmbeddingStore store(8);
  for (int i = 0; i < 60; ++i) store.Add(Qid(i), RandomUnit(8, rng));
  DocumentTask doc;
  doc.mentions = {Mention("a", Range(0, 20)), Mention("b", Range(13, 33)),
                  Mention("c", Range(33, 53))};
  EXPECT_EQ(BuildDocumentMatrix(doc, store, kUnweighted).size(), 53u);
}

TEST(BuildDocumentMatrixTest, NoEmbeddableCandidates) {
  EmbeddingStore store(2);
  DocumentTask doc;
  doc.mentions = {Mention("a", {"x", "y"})};
  EXPECT_EQ(KindOf([&] { BuildDocumentMatrix(doc, store, kUnweighted); }),
            ErrorKind::kEmptyDocument);
}

TEST(LearnSubspaceTest, RankOneDocument) {
  std::vector<double> u{0.0, 0.6, 0.8};
  DocumentMatrix dm;
  for (int i = 0; i < 6; ++i) {
    dm.entity_ids.push_back(Qid(i));
    dm.matrix.AppendRow(u);
    dm.weights.push_back(1.0);
  }
  Subspace s = LearnSubspace(dm, 10);
  ASSERT_EQ(s.rank(), 1u);
  EXPECT_NEAR(s.basis(1, 0), 0.6, 1e-12);
  EXPECT_NEAR(s.basis(2, 0), 0.8, 1e-12);
}

TEST(LearnSubspaceTest, ZeroWeightsAnnihilateRows) {
  std::mt19937_64 rng(3);
  DocumentMatrix dm;
  for (int i = 0; i < 5; ++i) {
    dm.entity_ids.push_back(Qid(i));
    dm.matrix.AppendRow(RandomUnit(4, rng));
    dm.weights.push_back(i == 0 ? 1.0 : 0.0);
  }
  Subspace s = LearnSubspace(dm, 3);
  ASSERT_EQ(s.rank(), 1u);
  double dot = 0.0;
  for (size_t r = 0; r < 4; ++r) dot += s.basis(r, 0) * dm.matrix(0, r);
  EXPECT_NEAR(std::abs(dot), 1.0, 1e-12);
  EXPECT_NEAR(s.strengths[0], 1.0, 1e-12);
}

TEST(LearnSubspaceTest, RecoversPlantedSubspace) {
  std::mt19937_64 rng(99);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const size_t d = 32;
  for (int trial = 0; trial < 10; ++trial) {
    Matrix planted = oracle::RandomOrthonormal(d, 3, rng);
    DocumentMatrix dm;
    for (int i = 0; i < 10; ++i) {
      std::vector<double> z = RandomUnit(3, rng);
      std::vector<double> row(d, 0.0);
      for (size_t r = 0; r < d; ++r) {
        for (size_t c = 0; c < 3; ++c) row[r] += planted(r, c) * z[c];
      }
      dm.matrix.AppendRow(row);
    }
    for (int i = 0; i < 40; ++i) {
      std::vector<double> row = RandomUnit(d, rng);
      for (double& x : row) x *= 0.3;
      dm.matrix.AppendRow(row);
    }
    dm.weights.assign(50, 1.0);
    dm.entity_ids = Range(0, 50);
    Subspace s = LearnSubspace(dm, 3);
    ASSERT_EQ(s.rank(), 3u);
    for (double cosine : oracle::PrincipalCosines(planted, s.basis)) {
      EXPECT_LT(std::acos(std::min(cosine, 1.0)) * 180.0 / M_PI, 15.0);
    }
  }
}

TEST(ScoreCandidateTest, HandExample) {
  Subspace s;
  s.basis = Matrix::FromRows({{1, 0}, {0, 1}, {0, 0}});
  s.strengths = {2.0, 1.0};
  std::vector<double> e{0.6, 0.8, 0.0};
  EXPECT_NEAR(ScoreCandidate(s, e), std::sqrt(2.08), 1e-15);
  EXPECT_NEAR(ScoreCandidate(s, e, false), 1.0, 1e-15);
  std::vector<double> first{1, 0, 0};
  EXPECT_DOUBLE_EQ(ScoreCandidate(s, first), 2.0);
  std::vector<double> orthogonal{0, 0, 1};
  EXPECT_EQ(ScoreCandidate(s, orthogonal), 0.0);
  std::vector<double> wrong{1, 0};
  EXPECT_EQ(KindOf([&] { ScoreCandidate(s, wrong); }), ErrorKind::kDimension);
}

TEST(ScoreCandidateTest, InvariantToBasisSignFlips) {
  std::mt19937_64 rng(12);
  Matrix e = testing_util::RandomMatrix(12, 6, rng);
  std::vector<double> w(12, 1.0);
  Subspace s = TruncatedSvd(e, w, 4);
  Subspace flipped = s;
  for (size_t r = 0; r < 6; ++r) {
    flipped.basis(r, 1) = -flipped.basis(r, 1);
    flipped.basis(r, 3) = -flipped.basis(r, 3);
  }
  for (int probe = 0; probe < 50; ++probe) {
    auto v = RandomUnit(6, rng);
    EXPECT_NEAR(ScoreCandidate(s, v), ScoreCandidate(flipped, v), 1e-12);
    std::vector<double> neg(v);
    for (double& x : neg) x = -x;
    EXPECT_NEAR(ScoreCandidate(s, v), ScoreCandidate(s, neg), 1e-12);
  }
}

TEST(RankByScoreTest, TiesAndMissing) {
  CandidateList list;
  list.candidates = {"a", "b", "c", "d"};
  const double inf = std::numeric_limits<double>::infinity();
  MentionLink link = RankByScore(list, {0.5, -inf, 0.5, 0.9}, {true, false, false, false});
  ASSERT_EQ(link.ranking.size(), 4u);
  EXPECT_EQ(link.ranking[0].qid, "d");
  EXPECT_EQ(link.ranking[1].qid, "c");
  EXPECT_EQ(link.ranking[2].qid, "a");
  EXPECT_EQ(link.ranking[3].qid, "b");
  EXPECT_FALSE(link.fallback);

  MentionLink all_missing = RankByScore(list, {-inf, -inf, -inf, -inf});
  EXPECT_TRUE(all_missing.fallback);
  EXPECT_EQ(*all_missing.predicted, "a");

  MentionLink empty = RankByScore(CandidateList{}, {});
  EXPECT_FALSE(empty.predicted);
}

TEST(LinkDocumentTest, SingleCandidateIsForced) {
  EmbeddingStore store(2);
  store.Add("far", std::vector<double>{0, 1});
  store.Add("x", std::vector<double>{1, 0});
  store.Add("y", std::vector<double>{1, 0.1});
  DocumentTask doc;
  doc.mentions = {Mention("m", {"far"}), Mention("n", {"x", "y"}),
                  Mention("o", {"x"})};
  LinkResult r = LinkDocument(doc, store, {10, kUnweighted, true});
  EXPECT_EQ(*r.mentions[0].predicted, "far");
}

TEST(LinkDocumentTest, MissingEmbeddingsFallBackToDegree) {
  EmbeddingStore store(2);
  DocumentTask doc;
  doc.mentions = {Mention("m", {"a", "b"})};
  LinkResult r = LinkDocument(doc, store, {});
  EXPECT_TRUE(r.mentions[0].fallback);
  EXPECT_EQ(*r.mentions[0].predicted, "a");
  EXPECT_EQ(r.effective_k, 0u);
}

TEST(LinkDocumentTest, ZeroVectorNeverWinsATie) {
  EmbeddingStore store(2);
  store.Add("zero", std::vector<double>{0, 0});
  store.Add("far", std::vector<double>{0, 1});
  store.Add("a", std::vector<double>{1, 0});
  store.Add("b", std::vector<double>{1, 0});
  DocumentTask doc;
  // "far" sits orthogonal to the rank-1 theme spanned by a and b.
  doc.mentions = {Mention("m", {"zero", "far"}), Mention("n", {"a"}),
                  Mention("o", {"b"})};
  LinkResult r = LinkDocument(doc, store, {1, kUnweighted, true});
  ASSERT_EQ(r.effective_k, 1u);
  EXPECT_EQ(r.mentions[0].ranking[0].score, r.mentions[0].ranking[1].score);
  EXPECT_EQ(*r.mentions[0].predicted, "far");
}

// Three "science" entities share a direction; each mention also offers an
// unrelated namesake. The theme decides every mention.
struct ScienceDoc {
  EmbeddingStore store{16};
  DocumentTask doc;

  explicit ScienceDoc(uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<double> theme = RandomUnit(16, rng);
    for (int m = 0; m < 4; ++m) {
      std::vector<double> gold = RandomUnit(16, rng);
      for (size_t i = 0; i < 16; ++i) gold[i] = theme[i] + 0.15 * gold[i];
      store.Add("science" + std::to_string(m), gold);
      store.Add("other" + std::to_string(m), RandomUnit(16, rng));
      store.Add("misc" + std::to_string(m), RandomUnit(16, rng));
      doc.mentions.push_back(Mention(
          "m" + std::to_string(m),
          {"other" + std::to_string(m), "misc" + std::to_string(m),
           "science" + std::to_string(m)},
          "science" + std::to_string(m)));
    }
  }
};

TEST(LinkDocumentTest, CoherentClusterWins) {
  for (uint64_t seed = 0; seed < 20; ++seed) {
    ScienceDoc fixture(seed);
    LinkResult r = LinkDocument(fixture.doc, fixture.store,
                                {1, kUnweighted, true});
    for (size_t m = 0; m < fixture.doc.mentions.size(); ++m) {
      EXPECT_EQ(*r.mentions[m].predicted, *fixture.doc.mentions[m].gold_qid)
          << "seed " << seed << " mention " << m;
    }
  }
}

TEST(LinkDocumentTest, ScoresAreCollective) {
  ScienceDoc fixture(4);
  LinkResult before = LinkDocument(fixture.doc, fixture.store,
                                   {2, kUnweighted, true});
  DocumentTask changed = fixture.doc;
  changed.mentions[3].candidates.candidates = {"other3"};
  LinkResult after = LinkDocument(changed, fixture.store,
                                  {2, kUnweighted, true});
  double shift = 0.0;
  for (size_t i = 0; i < 3; ++i) {
    shift += std::abs(before.mentions[0].ranking[i].score -
                      after.mentions[0].ranking[i].score);
  }
  EXPECT_GT(shift, 1e-6);
}

TEST(LinkDocumentTest, PlantedGoldOutranksNoise) {
  std::mt19937_64 rng(5);
  const size_t d = 32;
  size_t wins = 0, total = 0;
  for (int trial = 0; trial < 5; ++trial) {
    Matrix planted = oracle::RandomOrthonormal(d, 3, rng);
    EmbeddingStore store(d);
    DocumentTask doc;
    int next = 0;
    for (int m = 0; m < 10; ++m) {
      std::vector<std::string> cands;
      std::vector<double> z = RandomUnit(3, rng);
      std::vector<double> noise = RandomUnit(d, rng);
      std::vector<double> gold(d);
      for (size_t r = 0; r < d; ++r) {
        for (size_t c = 0; c < 3; ++c) gold[r] += planted(r, c) * z[c];
        gold[r] += 0.3 * noise[r];
      }
      std::string gold_id = Qid(next++);
      store.Add(gold_id, gold);
      for (int j = 0; j < 4; ++j) {
        cands.push_back(Qid(next));
        store.Add(Qid(next++), RandomUnit(d, rng));
      }
      cands.push_back(gold_id);
      doc.mentions.push_back(Mention("m", cands, gold_id));
    }
    LinkResult r = LinkDocument(doc, store, {3, kUnweighted, true});
    for (size_t m = 0; m < 10; ++m) {
      wins += *r.mentions[m].predicted == *doc.mentions[m].gold_qid;
      ++total;
    }
  }
  EXPECT_GE(wins * 10, total * 9);
}

TEST(LinkDocumentTest, PermutationAndScaleInvariance) {
  ScienceDoc fixture(7);
  const EigenOptions options{3, kUnweighted, true};
  LinkResult base = LinkDocument(fixture.doc, fixture.store, options);

  DocumentTask reversed = fixture.doc;
  std::reverse(reversed.mentions.begin(), reversed.mentions.end());
  LinkResult permuted = LinkDocument(reversed, fixture.store, options);

  EmbeddingStore scaled(16);
  for (const auto& id : fixture.store.ids()) {
    std::vector<double> v(fixture.store.Find(id).begin(),
                          fixture.store.Find(id).end());
    for (double& x : v) x *= -7.5;
    scaled.Add(id, v);
  }
  LinkResult rescaled = LinkDocument(fixture.doc, scaled, options);

  const size_t n = fixture.doc.mentions.size();
  for (size_t m = 0; m < n; ++m) {
    const MentionLink& a = base.mentions[m];
    const MentionLink& b = permuted.mentions[n - 1 - m];
    const MentionLink& c = rescaled.mentions[m];
    EXPECT_EQ(*a.predicted, *b.predicted);
    EXPECT_EQ(*a.predicted, *c.predicted);
    for (size_t i = 0; i < a.ranking.size(); ++i) {
      EXPECT_EQ(a.ranking[i].qid, b.ranking[i].qid);
      EXPECT_NEAR(a.ranking[i].score, b.ranking[i].score, 1e-9);
      EXPECT_NEAR(a.ranking[i].score, c.ranking[i].score, 1e-9);
    }
  }
}

}  // namespace
}  // namespace eigenthemes
