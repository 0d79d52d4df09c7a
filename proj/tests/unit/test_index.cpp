#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "brute_force.hpp"
#include "outfit/index.hpp"

using namespace outfit;

namespace {

std::vector<std::pair<std::string, PartDescriptor>> inventory(std::mt19937_64& rng, std::size_t n, std::size_t dim) {
  std::vector<std::pair<std::string, PartDescriptor>> items;
  for (std::size_t i = 0; i < n; ++i)
    items.emplace_back("item" + std::to_string(i), PartDescriptor(oracle::random_simplex(rng, dim, 0.3)));
  return items;
}

}  // namespace

TEST(InventoryIndex, BuildErrors) {
  EXPECT_THROW(InventoryIndex({}, Metric::L1), std::invalid_argument);
  EXPECT_THROW(InventoryIndex({{"a", PartDescriptor({1.0})}, {"a", PartDescriptor({1.0})}}, Metric::L1),
               std::invalid_argument);
  EXPECT_THROW(InventoryIndex({{"a", PartDescriptor({1.0})}, {"b", PartDescriptor({0.5, 0.5})}}, Metric::L1),
               std::invalid_argument);
  EXPECT_EQ(InventoryIndex({{"a", PartDescriptor({1.0})}}, Metric::L1).size(), 1u);
}

TEST(InventoryIndex, SelfMatchAndHandOrder) {
  // L1 from (1,0): a=(1,0) 0, b=(.5,.5) 1, c=(0,1) 2, d=(.75,.25) .5, e=(.9,.1) .2.
  InventoryIndex idx({{"a", PartDescriptor({1, 0})},
                      {"b", PartDescriptor({0.5, 0.5})},
                      {"c", PartDescriptor({0, 1})},
                      {"d", PartDescriptor({0.75, 0.25})},
                      {"e", PartDescriptor({0.9, 0.1})}},
                     Metric::L1);
  const auto r = idx.query(PartDescriptor({1, 0}), 5);
  std::vector<std::string> ids;
  for (const auto& e : r.entries) ids.push_back(e.id);
  EXPECT_EQ(ids, (std::vector<std::string>{"a", "e", "d", "b", "c"}));
  EXPECT_EQ(r.entries[0].distance, 0.0);
  EXPECT_NEAR(r.entries[1].distance, 0.2, 1e-12);
}

TEST(InventoryIndex, TopTenAndOversizedK) {
  std::mt19937_64 rng(2);
  InventoryIndex idx(inventory(rng, 30, 8), Metric::L1);
  const auto q = PartDescriptor(oracle::random_simplex(rng, 8));
  EXPECT_EQ(idx.query(q, 10).entries.size(), 10u);
  const auto all = idx.query(q, 50);
  EXPECT_EQ(all.entries.size(), 30u);
  EXPECT_TRUE(all.truncated);
  EXPECT_THROW(idx.query(q, 0), std::invalid_argument);
  EXPECT_THROW(idx.query(PartDescriptor({1.0}), 1), std::invalid_argument);
}

TEST(InventoryIndex, MatchesFullScanAllMetrics) {
  std::mt19937_64 rng(3);
  for (Metric m : {Metric::L1, Metric::L2, Metric::KL}) {
    for (int t = 0; t < 10; ++t) {
      auto items = inventory(rng, 200, 12);
      items.push_back({"dup", items[5].second});
      const auto oracle_metric = m == Metric::L1 ? oracle::Dist::L1 : m == Metric::L2 ? oracle::Dist::L2 : oracle::Dist::KL;
      InventoryIndex idx(items, m);
      const auto q = PartDescriptor(oracle::random_simplex(rng, 12, 0.3));
      std::vector<std::pair<std::string, double>> scored;
      for (const auto& [id, d] : items) scored.emplace_back(id, oracle::dist(oracle_metric, q.values, d.values));
      const auto expect = oracle::full_scan(scored);
      const auto got = idx.query(q, 25);
      for (std::size_t r = 0; r < 25; ++r) {
        EXPECT_EQ(got.entries[r].id, expect[r].first);
        EXPECT_NEAR(got.entries[r].distance, expect[r].second, 1e-9);
        EXPECT_GE(got.entries[r].distance, 0.0);
      }
    }
  }
}

TEST(InventoryIndex, PrefixAndInsertionOrderInvariance) {
  std::mt19937_64 rng(4);
  auto items = inventory(rng, 100, 6);
  for (int i = 0; i < 10; ++i) items.push_back({"copy" + std::to_string(i), items[i].second});
  InventoryIndex idx(items, Metric::L1);
  std::shuffle(items.begin(), items.end(), rng);
  InventoryIndex shuffled(items, Metric::L1);
  const auto q = items[3].second;
  for (std::size_t k = 1; k < 40; ++k) {
    const auto a = idx.query(q, k), b = idx.query(q, k + 1);
    EXPECT_TRUE(std::equal(a.entries.begin(), a.entries.end(), b.entries.begin()));
    EXPECT_EQ(a.entries, shuffled.query(q, k).entries);
  }
}

TEST(Metric, SymmetryAndParsing) {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 50; ++t) {
    const auto a = oracle::random_simplex(rng, 10, 0.5), b = oracle::random_simplex(rng, 10, 0.5);
    for (Metric m : {Metric::L1, Metric::L2, Metric::KL}) {
      EXPECT_NEAR(distance(m, a, b), distance(m, b, a), 1e-12);
      EXPECT_GE(distance(m, a, b), 0.0);
    }
  }
  EXPECT_EQ(parse_metric("kl"), Metric::KL);
  EXPECT_THROW(parse_metric("emd"), std::invalid_argument);
}

TEST(Interleave, RoundRobinWithoutDuplicates) {
  RankedList a{"q", {{"x", 0.1}, {"y", 0.2}, {"z", 0.3}}, 3, false};
  RankedList b{"q", {{"y", 0.05}, {"w", 0.1}}, 2, false};
  const auto m = interleave({a, b}, 4);
  std::vector<std::string> ids;
  for (const auto& e : m.entries) ids.push_back(e.id);
  EXPECT_EQ(ids, (std::vector<std::string>{"x", "y", "w", "z"}));
}

TEST(InventoryIndex, LargeInventoryBuilds) {
  std::vector<std::pair<std::string, PartDescriptor>> items;
  items.reserve(350000);
  for (std::size_t i = 0; i < 350000; ++i) {
    std::vector<double> v(kHsvDims, 0.0);
    v[i % kHueBins] = v[kSatOffset + i % kSatBins] = v[kValOffset + (i / 8) % kValBins] = 1.0 / 3;
    items.emplace_back(std::to_string(i), PartDescriptor(std::move(v)));
  }
  InventoryIndex idx(std::move(items), Metric::L1);
  EXPECT_EQ(idx.size(), 350000u);
  EXPECT_EQ(idx.query(idx.descriptor(7), 10).entries.size(), 10u);
}
