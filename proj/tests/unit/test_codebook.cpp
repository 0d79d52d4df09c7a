#include <gtest/gtest.h>

#include <random>
#include <set>

#include "brute_force.hpp"
#include "outfit/codebook.hpp"

using namespace outfit;

namespace {

std::vector<Vector> two_blobs(std::mt19937_64& rng, std::size_t per, std::vector<Vector>* a_out = nullptr,
                              std::vector<Vector>* b_out = nullptr) {
  std::normal_distribution<double> noise(0.0, 0.05);
  std::vector<Vector> pts;
  for (std::size_t i = 0; i < per; ++i) {
    Vector a{noise(rng), noise(rng)}, b{10 + noise(rng), 10 + noise(rng)};
    pts.push_back(a);
    pts.push_back(b);
    if (a_out) a_out->push_back(a);
    if (b_out) b_out->push_back(b);
  }
  return pts;
}

}  // namespace

TEST(KMeans, TwoSeparatedClustersRecoverMeans) {
  std::mt19937_64 rng(1);
  std::vector<Vector> a, b;
  const auto pts = two_blobs(rng, 50, &a, &b);
  const auto cb = train_codebook(pts, 2, 17).codebook;
  const auto ma = oracle::mean(a), mb = oracle::mean(b);
  const std::size_t ia = quantize(a[0], cb), ib = quantize(b[0], cb);
  ASSERT_NE(ia, ib);
  for (std::size_t d = 0; d < 2; ++d) {
    EXPECT_NEAR(cb.centroids[ia][d], ma[d], 1e-9);
    EXPECT_NEAR(cb.centroids[ib][d], mb[d], 1e-9);
  }
}

TEST(KMeans, KEqualsDistinctPointsGivesThePoints) {
  const std::vector<Vector> pts{{0, 0}, {1, 0}, {0, 1}, {1, 1}, {1, 1}, {0, 0}};
  const auto res = kmeans(pts, 4, 3);
  EXPECT_DOUBLE_EQ(res.inertia_history.back(), 0.0);
  std::set<Vector> cs(res.centroids.begin(), res.centroids.end());
  EXPECT_EQ(cs, (std::set<Vector>{{0, 0}, {1, 0}, {0, 1}, {1, 1}}));
}

TEST(KMeans, DeterministicForSeed) {
  std::mt19937_64 rng(4);
  std::vector<Vector> pts;
  for (int i = 0; i < 200; ++i) pts.push_back(oracle::random_simplex(rng, 5));
  EXPECT_EQ(train_codebook(pts, 6, 99).codebook.centroids, train_codebook(pts, 6, 99).codebook.centroids);
}

TEST(KMeans, InertiaNonIncreasing) {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 20; ++t) {
    std::vector<Vector> pts;
    for (int i = 0; i < 150; ++i) pts.push_back(oracle::random_simplex(rng, 6, 0.3));
    const auto res = kmeans(pts, 8, static_cast<std::uint64_t>(t));
    for (std::size_t i = 1; i < res.inertia_history.size(); ++i)
      EXPECT_LE(res.inertia_history[i], res.inertia_history[i - 1] * (1 + 1e-12));
  }
}

TEST(KMeans, TooFewDistinctInputsThrows) {
  const std::vector<Vector> pts{{1, 1}, {1, 1}, {2, 2}};
  EXPECT_THROW(kmeans(pts, 3, 0), std::invalid_argument);
  EXPECT_THROW(train_codebook(pts, 1, 0), std::invalid_argument);
}

TEST(Quantize, SelfAssignmentAndTieBreak) {
  Codebook cb;
  cb.centroids = {{0.0, 0.0}, {1.0, 1.0}, {4.0, 0.0}};
  for (std::size_t i = 0; i < cb.size(); ++i) EXPECT_EQ(quantize(cb.centroids[i], cb), i);
  EXPECT_EQ(quantize({0.5, 0.5}, cb), 0u);
  EXPECT_THROW(quantize({1.0}, cb), std::invalid_argument);
}

TEST(Quantize, MatchesExhaustiveScan) {
  std::mt19937_64 rng(8);
  std::vector<Vector> pts;
  for (int i = 0; i < 300; ++i) pts.push_back(oracle::random_simplex(rng, 8));
  const auto cb = train_codebook(pts, 10, 2).codebook;
  for (int i = 0; i < 500; ++i) {
    const auto v = oracle::random_simplex(rng, 8);
    EXPECT_EQ(quantize(v, cb), oracle::nearest(cb.centroids, v));
  }
}

TEST(CodebookJson, RoundTripAndValidation) {
  Codebook cb;
  cb.centroids = {{0.1, 0.9}, {0.7, 0.3}};
  cb.trained_on = "abc";
  const auto j = codebook_to_json(cb);
  EXPECT_EQ(j["K"], 2);
  EXPECT_EQ(j["dim"], 2);
  const auto back = codebook_from_json(j);
  EXPECT_EQ(back.centroids, cb.centroids);
  auto bad = j;
  bad["K"] = 3;
  EXPECT_THROW(codebook_from_json(bad), std::invalid_argument);
}
