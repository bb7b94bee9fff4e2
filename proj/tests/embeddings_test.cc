#include "eigenthemes/embeddings.h"

#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "gtest/gtest.h"
#include "eigenthemes/errors.h"
#include "test_util.h"

namespace eigenthemes {
namespace {

using testing_util::KindOf;
using testing_util::ScratchDir;

TEST(ParseEmbeddingsTest, MinimalFile) {
  std::istringstream in("2 3\nq1 1 0 0\nq2 0 1 0");
  EmbeddingStore store = ParseEmbeddings(in);
  EXPECT_EQ(store.dim(), 3u);
  EXPECT_EQ(store.size(), 2u);
  auto q2 = store.Find("q2");
  ASSERT_EQ(q2.size(), 3u);
  EXPECT_EQ(q2[1], 1.0);
  EXPECT_TRUE(store.Find("q3").empty());
  EXPECT_FALSE(store.Contains("q3"));
}

TEST(ParseEmbeddingsTest, ShortRowIsFormatError) {
  std::istringstream in("1 3\nq1 1 0\n");
  EXPECT_EQ(KindOf([&] { ParseEmbeddings(in); }), ErrorKind::kFormat);
}

TEST(ParseEmbeddingsTest, RowCountMismatch) {
  std::istringstream missing("3 2\nq1 1 0\nq2 0 1\n");
  EXPECT_EQ(KindOf([&] { ParseEmbeddings(missing); }), ErrorKind::kFormat);
  std::istringstream extra("1 2\nq1 1 0\nq2 0 1\n");
  EXPECT_EQ(KindOf([&] { ParseEmbeddings(extra); }), ErrorKind::kFormat);
}

TEST(ParseEmbeddingsTest, NonFiniteIsDataError) {
  std::istringstream in("1 2\nq1 nan 0\n");
  EXPECT_EQ(KindOf([&] { ParseEmbeddings(in); }), ErrorKind::kData);
  std::istringstream inf("1 2\nq1 1 inf\n");
  EXPECT_EQ(KindOf([&] { ParseEmbeddings(inf); }), ErrorKind::kData);
}

TEST(ParseEmbeddingsTest, BadHeader) {
  std::istringstream in("two three\n");
  EXPECT_NE(KindOf([&] { ParseEmbeddings(in); }), ErrorKind::kIo);
}

TEST(EmbeddingStoreTest, AddValidates) {
  EmbeddingStore store(2);
  std::vector<double> ok{1.0, 2.0};
  store.Add("a", ok);
  EXPECT_EQ(KindOf([&] { store.Add("a", ok); }), ErrorKind::kFormat);
  std::vector<double> wrong{1.0};
  EXPECT_EQ(KindOf([&] { store.Add("b", wrong); }), ErrorKind::kDimension);
  std::vector<double> bad{1.0, std::numeric_limits<double>::infinity()};
  EXPECT_EQ(KindOf([&] { store.Add("c", bad); }), ErrorKind::kData);
}

TEST(EmbeddingFileTest, HundredVectorRoundTrip) {
  ScratchDir dir("emb");
  std::mt19937_64 rng(21);
  std::normal_distribution<double> gauss(0.0, 3.0);
  EmbeddingStore source(16);
  std::vector<std::vector<double>> rows;
  for (int i = 0; i < 100; ++i) {
    std::vector<double> v(16);
    for (double& x : v) x = gauss(rng);
    rows.push_back(v);
    source.Add("Q" + std::to_string(i), v);
  }
  WriteEmbeddings(source, dir / "e.txt");
  EmbeddingStore loaded = LoadEmbeddings(dir / "e.txt");
  ASSERT_EQ(loaded.size(), 100u);
  ASSERT_EQ(loaded.dim(), 16u);
  for (int i = 0; i < 100; ++i) {
    auto got = loaded.Find("Q" + std::to_string(i));
    ASSERT_EQ(got.size(), 16u);
    for (size_t j = 0; j < 16; ++j) EXPECT_EQ(got[j], rows[i][j]);
  }
  EXPECT_EQ(loaded.ids(), source.ids());
}

TEST(UnitNormalizeTest, Examples) {
  std::vector<double> v{3.0, 4.0};
  auto n = UnitNormalize(v);
  EXPECT_DOUBLE_EQ(n[0], 0.6);
  EXPECT_DOUBLE_EQ(n[1], 0.8);
  std::vector<double> zero{0.0, 0.0};
  EXPECT_EQ(UnitNormalize(zero), zero);
}

TEST(UnitNormalizeTest, NormAndIdempotence) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> scale(1e-6, 1e6);
  for (int trial = 0; trial < 200; ++trial) {
    auto v = testing_util::RandomUnit(128, rng);
    for (double& x : v) x *= scale(rng);
    auto once = UnitNormalize(v);
    EXPECT_NEAR(L2Norm(once), 1.0, 1e-12);
    auto twice = UnitNormalize(once);
    for (size_t i = 0; i < v.size(); ++i) EXPECT_NEAR(twice[i], once[i], 1e-15);
  }
}

TEST(CosineTest, Basics) {
  std::vector<double> a{1.0, 0.0};
  std::vector<double> b{0.0, 2.0};
  std::vector<double> c{-3.0, 0.0};
  std::vector<double> zero{0.0, 0.0};
  EXPECT_DOUBLE_EQ(Cosine(a, b), 0.0);
  EXPECT_DOUBLE_EQ(Cosine(a, c), -1.0);
  EXPECT_DOUBLE_EQ(Cosine(a, zero), 0.0);
  EXPECT_DOUBLE_EQ(Dot(a, c), -3.0);
  EXPECT_DOUBLE_EQ(L2Norm(c), 3.0);
}

}  // namespace
}  // namespace eigenthemes
