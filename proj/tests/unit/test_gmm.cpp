#include <gtest/gtest.h>

#include <random>

#include "brute_force.hpp"
#include "outfit/recommenders/gmm.hpp"

using namespace outfit;

namespace {

GmmModel random_model(std::mt19937_64& rng, std::size_t M, std::size_t P, std::size_t K) {
  std::uniform_real_distribution<double> pos(0.0, static_cast<double>(K - 1)), var(0.3, 6.0), w(0.1, 1.0);
  GmmModel m;
  double total = 0.0;
  for (std::size_t c = 0; c < M; ++c) {
    m.weights.push_back(w(rng));
    total += m.weights.back();
    std::vector<double> mu, s2;
    for (std::size_t d = 0; d < P; ++d) {
      mu.push_back(pos(rng));
      s2.push_back(var(rng));
    }
    m.means.push_back(mu);
    m.variances.push_back(s2);
  }
  for (double& x : m.weights) x /= total;
  return m;
}

}  // namespace

TEST(GmmTrain, SingleComponentIsClosedForm) {
  const std::vector<std::vector<double>> data{{1, 2}, {3, 2}, {5, 2}, {7, 2}};
  const auto t = gmm_train(data, 1, 0);
  EXPECT_NEAR(t.model.weights[0], 1.0, 1e-12);
  EXPECT_NEAR(t.model.means[0][0], 4.0, 1e-12);
  EXPECT_NEAR(t.model.means[0][1], 2.0, 1e-12);
  EXPECT_NEAR(t.model.variances[0][0], 5.0, 1e-12);   // population variance of 1,3,5,7
  EXPECT_NEAR(t.model.variances[0][1], 1e-4, 1e-15);  // floored
}

TEST(GmmTrain, TwoClustersRecoverClusterMeans) {
  std::mt19937_64 rng(9);
  std::normal_distribution<double> n(0.0, 0.3);
  std::vector<std::vector<double>> data, a, b;
  for (int i = 0; i < 200; ++i) {
    a.push_back({1 + n(rng), 2 + n(rng)});
    b.push_back({9 + n(rng), 12 + n(rng)});
    data.push_back(a.back());
    data.push_back(b.back());
  }
  const auto t = gmm_train(data, 2, 1);
  const auto ma = oracle::mean(a), mb = oracle::mean(b);
  const std::size_t ia = t.model.means[0][0] < t.model.means[1][0] ? 0 : 1;
  for (std::size_t d = 0; d < 2; ++d) {
    EXPECT_NEAR(t.model.means[ia][d], ma[d], 1e-3);
    EXPECT_NEAR(t.model.means[1 - ia][d], mb[d], 1e-3);
  }
  EXPECT_NEAR(t.model.weights[0] + t.model.weights[1], 1.0, 1e-9);
}

TEST(GmmTrain, LogLikelihoodNonDecreasing) {
  std::mt19937_64 rng(12);
  std::uniform_int_distribution<int> word(0, 15);
  for (int run = 0; run < 20; ++run) {
    std::vector<std::vector<double>> data;
    for (int i = 0; i < 120; ++i) data.push_back({double(word(rng)), double(word(rng)), double(word(rng))});
    const auto t = gmm_train(data, 4, static_cast<std::uint64_t>(run));
    for (std::size_t i = 1; i < t.log_likelihood.size(); ++i)
      EXPECT_GE(t.log_likelihood[i], t.log_likelihood[i - 1] - 1e-9 * std::abs(t.log_likelihood[i - 1]));
    double wsum = 0.0;
    for (double w : t.model.weights) wsum += w;
    EXPECT_NEAR(wsum, 1.0, 1e-9);
    for (const auto& v : t.model.variances)
      for (double x : v) EXPECT_GE(x, 1e-4);
  }
}

TEST(GmmTrain, DegenerateDataWarnsAndFloors) {
  const std::vector<std::vector<double>> data(10, {3.0, 3.0});
  const auto t = gmm_train(data, 3, 0);
  EXPECT_FALSE(t.warnings.empty());
  for (const auto& v : t.model.variances)
    for (double x : v) EXPECT_DOUBLE_EQ(x, 1e-4);
}

TEST(GmmTrain, Preconditions) {
  EXPECT_THROW(gmm_train({{1.0}}, 2, 0), std::invalid_argument);
  EXPECT_THROW(gmm_train({}, 1, 0), std::invalid_argument);
  EXPECT_THROW(gmm_train({{1.0}, {1.0, 2.0}}, 1, 0), std::invalid_argument);
}

TEST(GmmInfer, UnimodalPicksCodewordNearestMean) {
  GmmModel m;
  m.weights = {1.0};
  m.means = {{2.0, 3.3}};
  m.variances = {{1.0, 2.0}};
  EXPECT_EQ(gmm_infer(m, {std::size_t{6}, std::nullopt}, 8).codeword, 3u);
  EXPECT_EQ(gmm_infer(m, {std::nullopt, std::size_t{0}}, 8).codeword, 2u);
}

TEST(GmmInfer, MatchesExhaustiveEnumeration) {
  std::mt19937_64 rng(31);
  for (int t = 0; t < 100; ++t) {
    const std::size_t M = 1 + rng() % 5, P = 2 + rng() % 3, K = 2 + rng() % 15;
    const auto m = random_model(rng, M, P, K);
    for (std::size_t missing = 0; missing < P; ++missing) {
      std::vector<std::optional<std::size_t>> q(P);
      for (std::size_t j = 0; j < P; ++j)
        if (j != missing) q[j] = rng() % K;
      EXPECT_EQ(gmm_infer(m, q, K).codeword, oracle::gmm_argmax(m.weights, m.means, m.variances, q, K));
    }
  }
}

TEST(GmmInfer, Preconditions) {
  GmmModel m;
  m.weights = {1.0};
  m.means = {{0.0, 0.0}};
  m.variances = {{1.0, 1.0}};
  EXPECT_THROW(gmm_infer(m, {std::size_t{1}, std::size_t{1}}, 4), std::invalid_argument);
  EXPECT_THROW(gmm_infer(m, {std::nullopt, std::nullopt}, 4), std::invalid_argument);
  EXPECT_THROW(gmm_infer(m, {std::nullopt}, 4), std::invalid_argument);
}

TEST(GmmRecommend, ReturnsWinningCentroid) {
  Codebook cb;
  cb.centroids = {{1, 0}, {0.5, 0.5}, {0, 1}};
  GmmModel m;
  m.weights = {0.5, 0.5};
  m.means = {{0, 2}, {2, 0}};
  m.variances = {{0.1, 0.1}, {0.1, 0.1}};
  HolisticDescriptor q{{PartDescriptor({0.9, 0.1}), PartDescriptor()}, {true, false}};
  std::size_t word = 99;
  EXPECT_EQ(gmm_recommend(m, cb, q, &word), PartDescriptor({0, 1}));
  EXPECT_EQ(word, 2u);
}
