#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "brute_force.hpp"
#include "eq11_fixture.hpp"
#include "outfit/eval.hpp"
#include "outfit/io.hpp"

using namespace outfit;

namespace {

RatingRecord rr(const std::string& q, const std::string& r, std::vector<int> z,
                std::optional<PatternClass> c = std::nullopt) {
  return {q, r, std::move(z), c};
}

}  // namespace

TEST(Disagreement, IdenticalRatersAreZero) {
  const std::vector<RatingRecord> rs(4, rr("q", "r", {1, 0, 2, -1, 1}));
  for (double g : disagreement(rs)) EXPECT_EQ(g, 0.0);
}

TEST(Disagreement, OppositeRaters) {
  const auto g = disagreement({rr("q", "a", {2, 2, 2, 2, 2}), rr("q", "b", {-1, -1, -1, -1, -1})});
  EXPECT_EQ(g, (std::vector<double>{15, 15}));
}

TEST(Disagreement, SingleRaterAndErrors) {
  EXPECT_EQ(disagreement({rr("q", "a", {2, 0})}), std::vector<double>{0});
  EXPECT_THROW(disagreement({rr("q", "a", {2, 0}), rr("q", "b", {1})}), std::invalid_argument);
}

TEST(Median, OddEvenAndOracle) {
  EXPECT_EQ(median({0, 0, 0}), 0.0);
  EXPECT_EQ(median({7, 1, 5, 3}), 4.0);
  EXPECT_THROW(median({}), std::invalid_argument);
  const std::vector<double> ten{9, 2, 31, 4, 4, 17, 0, 8, 12, 5};
  EXPECT_EQ(median(ten), oracle::median_by_sort(ten));
  EXPECT_EQ(median(ten), 6.5);
}

TEST(Score, AllAgreeExcludesEveryQuery) {
  std::vector<RatingRecord> rs;
  for (int q = 0; q < 3; ++q)
    for (int r = 0; r < 5; ++r) rs.push_back(rr("q" + std::to_string(q), "r" + std::to_string(r), {1, 1, 1}));
  RatingsTable t{{"a", "b", "c"}, rs};
  const auto s = evaluate(t);
  EXPECT_EQ(s.threshold, 0.0);
  EXPECT_EQ(s.excluded_queries, 3u);
  for (double v : s.raw_score) EXPECT_EQ(v, 0.0);
  for (const auto& n : s.normalized) EXPECT_FALSE(n.has_value());
}

TEST(Score, TwoQueryFixtureMatchesHandComputation) {
  const auto rs = fixture::eq11_records(2);
  const double at = median(all_disagreements(rs));
  EXPECT_EQ(at, 14.5);
  const auto s = score(rs, at);
  const std::vector<double> expect{0.4, 0.4, 0.0, -0.2, 0.4};
  for (std::size_t a = 0; a < 5; ++a) EXPECT_NEAR(s.raw_score[a], expect[a], 1e-12);
  EXPECT_NEAR(s.confidence_mass, 1.0, 1e-12);
  EXPECT_NEAR(*s.normalized[3], (-0.2 + 1) / 3, 1e-12);
}

TEST(Score, FourQueryFixture) {
  const RatingsTable t{{"pr", "cnnc", "gmm", "mcl", "tar"}, fixture::eq11_records()};
  const auto s = evaluate(t);
  EXPECT_EQ(s.threshold, fixture::kThreshold);
  for (std::size_t q = 0; q < 4; ++q) {
    EXPECT_NEAR(s.queries[q].confidence, fixture::kConfidence[q], 1e-12);
    for (std::size_t r = 0; r < 5; ++r) EXPECT_EQ(s.gamma[q * 5 + r], fixture::kGamma[q][r]);
  }
  EXPECT_EQ(s.excluded_queries, 1u);
  for (std::size_t a = 0; a < 5; ++a) {
    EXPECT_NEAR(s.raw_score[a], fixture::kRawScore[a], 1e-12);
    EXPECT_NEAR(*s.normalized[a], fixture::kNormalized[a], 1e-12);
  }
  const auto j = stats_to_json(s);
  EXPECT_EQ(j["excluded_queries"], 1);
  EXPECT_EQ(j["algorithms"][1]["name"], "cnnc");
}

TEST(Score, PermutationInvariance) {
  auto rs = fixture::eq11_records();
  const auto base = score(rs, fixture::kThreshold);
  std::mt19937_64 rng(1);
  for (int t = 0; t < 20; ++t) {
    std::shuffle(rs.begin(), rs.end(), rng);
    const auto s = score(rs, fixture::kThreshold);
    for (std::size_t a = 0; a < 5; ++a) EXPECT_EQ(s.raw_score[a], base.raw_score[a]);
  }
  // Permuting algorithm columns permutes the scores.
  const std::vector<std::size_t> perm{4, 2, 0, 1, 3};
  auto permuted = fixture::eq11_records();
  for (auto& r : permuted) {
    std::vector<int> z(5);
    for (std::size_t a = 0; a < 5; ++a) z[a] = r.ratings[perm[a]];
    r.ratings = z;
  }
  const auto s = score(permuted, fixture::kThreshold);
  for (std::size_t a = 0; a < 5; ++a) EXPECT_NEAR(s.raw_score[a], base.raw_score[perm[a]], 1e-12);
}

TEST(Score, Errors) {
  EXPECT_THROW(score({}, 1.0), std::invalid_argument);
  EXPECT_THROW(score({rr("q", "a", {1}), rr("q", "a", {2})}, 1.0), std::invalid_argument);
  EXPECT_THROW(score({rr("q", "a", {1}), rr("q", "b", {2, 1})}, 1.0), std::invalid_argument);
}

TEST(RatingsCsv, ParseAndRoundTrip) {
  const std::string csv =
      "query_id,rater_id,pr,cnnc,query_class\n"
      "q1,f1,-1,2,solid\n"
      "q1,f2,0,1,solid\n"
      "\n"
      "q2,f1,1,1,patterned\n";
  const auto t = parse_ratings_csv(csv);
  EXPECT_EQ(t.algorithms, (std::vector<std::string>{"pr", "cnnc"}));
  ASSERT_EQ(t.records.size(), 3u);
  EXPECT_EQ(t.records[0].ratings, (std::vector<int>{-1, 2}));
  EXPECT_EQ(t.records[2].query_class, PatternClass::Patterned);
  const auto again = parse_ratings_csv(ratings_to_csv(t));
  EXPECT_EQ(again.records.size(), 3u);
  EXPECT_EQ(again.records[1].ratings, t.records[1].ratings);
}

TEST(RatingsCsv, RejectsBadInput) {
  EXPECT_THROW(parse_ratings_csv(""), DataError);
  EXPECT_THROW(parse_ratings_csv("a,b,c\n"), DataError);
  EXPECT_THROW(parse_ratings_csv("query_id,rater_id,pr\nq,f,3\n"), DataError);
  EXPECT_THROW(parse_ratings_csv("query_id,rater_id,pr\nq,f,x\n"), DataError);
  EXPECT_THROW(parse_ratings_csv("query_id,rater_id,pr\nq,f\n"), DataError);
}

TEST(SolidProbability, Buckets) {
  const PartDescriptor solid = [] {
    std::vector<double> v(40, 0.0);
    v[3] = v[31] = v[39] = 1.0 / 3;
    return PartDescriptor(v);
  }();
  const PartDescriptor busy = [] {
    std::vector<double> v(40, 0.0);
    for (std::size_t i = 0; i < 24; ++i) v[i] = 1.0 / 72;
    v[31] = v[39] = 1.0 / 3;
    return PartDescriptor(v);
  }();
  std::vector<RatedRetrieval> rated{{2, {solid, solid}}, {-1, {busy, busy, busy}}, {1, {solid, busy}},
                                    {1, {busy, solid, solid, busy}}};
  const auto p = solid_probability(rated);
  EXPECT_DOUBLE_EQ(p.mean_fraction.at(2), 1.0);
  EXPECT_DOUBLE_EQ(p.mean_fraction.at(-1), 0.0);
  EXPECT_DOUBLE_EQ(p.mean_fraction.at(1), 0.5);
  EXPECT_EQ(p.lists.at(1), 2u);
}

TEST(AgreementReport, BucketTotalsMatchQueryCounts) {
  std::vector<RatingRecord> rs;
  std::mt19937_64 rng(4);
  std::uniform_int_distribution<int> rating(-1, 2);
  for (int q = 0; q < 937; ++q) {
    const auto cls = q < 187 ? PatternClass::Solid : PatternClass::Patterned;
    for (int r = 0; r < 5; ++r) {
      std::vector<int> z(5);
      for (auto& x : z) x = rating(rng);
      rs.push_back(rr("q" + std::to_string(q), "r" + std::to_string(r), z, cls));
    }
  }
  const double at = median(all_disagreements(rs));
  const auto rep = agreement_report(rs, at);
  EXPECT_EQ(rep.solid.queries, 187u);
  EXPECT_EQ(rep.patterned.queries, 750u);
  std::size_t solid_total = 0, patterned_total = 0;
  for (auto c : rep.solid.retained_counts) solid_total += c;
  for (auto c : rep.patterned.retained_counts) patterned_total += c;
  EXPECT_EQ(solid_total, 187u);
  EXPECT_EQ(patterned_total, 750u);
}

TEST(AgreementReport, UniformFixtureAndSingleQuery) {
  // One query per rating level, all raters agree with a single dissenter.
  std::vector<RatingRecord> rs;
  for (int level = -1; level <= 2; ++level) {
    const std::string q = "q" + std::to_string(level + 1);
    for (int r = 0; r < 4; ++r) rs.push_back(rr(q, "r" + std::to_string(r), {level}, PatternClass::Solid));
    rs.push_back(rr(q, "x", {level == 2 ? -1 : 2}, PatternClass::Solid));
  }
  const auto rep = agreement_report(rs, 4.0);  // agreeing gammas are 1..3, dissenters 4..12
  for (std::size_t v = 0; v < kRatingLevels; ++v) EXPECT_EQ(rep.solid.ratings[v], 4u);

  const auto one = agreement_report({rr("q", "a", {1}, PatternClass::Patterned)}, 1.0);
  EXPECT_EQ(one.patterned.queries, 1u);
  EXPECT_EQ(one.patterned.retained_counts, (std::vector<std::size_t>{0, 1}));
  EXPECT_THROW(agreement_report({rr("q", "a", {1})}, 1.0), DataError);
}
