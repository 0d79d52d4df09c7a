#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "outfit/features.hpp"

using namespace outfit;

namespace {

const HsvPixel kRed{0.0, 1.0, 1.0};
const HsvPixel kCyan{180.0, 1.0, 1.0};

HsvImage random_image(std::mt19937_64& rng, int w, int h) {
  std::uniform_real_distribution<double> hue(0.0, 360.0), unit(0.0, 1.0);
  HsvImage img(w, h);
  for (auto& p : img.pixels) p = {hue(rng), unit(rng), unit(rng)};
  return img;
}

}  // namespace

TEST(RgbToHsv, PrimaryColours) {
  const auto red = rgb_to_hsv(1, 0, 0);
  EXPECT_DOUBLE_EQ(red.h, 0.0);
  EXPECT_DOUBLE_EQ(red.s, 1.0);
  EXPECT_DOUBLE_EQ(red.v, 1.0);
  EXPECT_DOUBLE_EQ(rgb_to_hsv(0, 1, 1).h, 180.0);
  EXPECT_DOUBLE_EQ(rgb_to_hsv(0, 0, 1).h, 240.0);
  EXPECT_DOUBLE_EQ(rgb_to_hsv(1, 0, 1).h, 300.0);
  const auto grey = rgb_to_hsv(0.5, 0.5, 0.5);
  EXPECT_DOUBLE_EQ(grey.s, 0.0);
  EXPECT_DOUBLE_EQ(grey.v, 0.5);
}

TEST(HsvHistogram, PureRed) {
  const std::vector<HsvPixel> px(50, kRed);
  const auto d = hsv_histogram(px);
  ASSERT_EQ(d.size(), 40u);
  std::vector<double> expect(40, 0.0);
  expect[0] = expect[kSatOffset + 7] = expect[kValOffset + 7] = 1.0 / 3.0;
  for (std::size_t i = 0; i < 40; ++i) EXPECT_NEAR(d[i], expect[i], 1e-15) << i;
}

TEST(HsvHistogram, HalfRedHalfCyan) {
  std::vector<HsvPixel> px(20, kRed);
  px.insert(px.end(), 20, kCyan);
  const auto d = hsv_histogram(px);
  EXPECT_NEAR(d[0], 1.0 / 6.0, 1e-15);
  EXPECT_NEAR(d[12], 1.0 / 6.0, 1e-15);
  for (std::size_t b = 1; b < kHueBins; ++b)
    if (b != 12) EXPECT_EQ(d[b], 0.0);
  EXPECT_NEAR(d[kSatOffset + 7], 1.0 / 3.0, 1e-15);
}

TEST(HsvHistogram, BinEdges) {
  EXPECT_EQ(hue_bin(0.0), 0u);
  EXPECT_EQ(hue_bin(14.999), 0u);
  EXPECT_EQ(hue_bin(15.0), 1u);
  EXPECT_EQ(hue_bin(359.999), 23u);
  EXPECT_EQ(hue_bin(360.0), 0u);
  EXPECT_EQ(unit_bin(0.0, 8), 0u);
  EXPECT_EQ(unit_bin(0.125, 8), 1u);
  EXPECT_EQ(unit_bin(0.12499, 8), 0u);
  EXPECT_EQ(unit_bin(1.0, 8), 7u);  // last bin is closed
}

TEST(HsvHistogram, EmptyRegionThrows) {
  EXPECT_THROW(hsv_histogram(std::vector<HsvPixel>{}), std::invalid_argument);
  HsvImage img(10, 10);
  EXPECT_THROW(img.region({0, 0, 0, 5}), std::invalid_argument);
}

TEST(HsvHistogram, ValidAndPermutationInvariant) {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 50; ++t) {
    const auto img = random_image(rng, 20, 30);
    auto px = img.region({2, 3, 15, 20});
    const auto d = hsv_histogram(px);
    EXPECT_TRUE(is_valid_descriptor(d));
    std::shuffle(px.begin(), px.end(), rng);
    EXPECT_EQ(hsv_histogram(px), d);
  }
}

TEST(SamplePatches, ForcedPlacementOnExactRegion) {
  HsvImage img(40, 40, kRed);
  const auto ps = sample_patches(img, {10, 20, 15, 15}, 1, 5);
  ASSERT_EQ(ps.size(), 1u);
  EXPECT_EQ(ps[0].x, 0);
  EXPECT_EQ(ps[0].y, 0);
  EXPECT_NEAR(ps[0].values[0], 0.0, 1e-12);
  EXPECT_NEAR(ps[0].values[1], 1.0, 1e-12);
}

TEST(SamplePatches, DeterministicAndInBounds) {
  std::mt19937_64 rng(3);
  const auto img = random_image(rng, 30, 30);
  const auto a = sample_patches(img, {0, 0, 30, 30}, 100, 9);
  const auto b = sample_patches(img, {0, 0, 30, 30}, 100, 9);
  ASSERT_EQ(a.size(), 100u);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].x, b[i].x);
    EXPECT_EQ(a[i].y, b[i].y);
    EXPECT_EQ(a[i].values, b[i].values);
    EXPECT_GE(a[i].x, 0);
    EXPECT_LE(a[i].x, 15);
    EXPECT_GE(a[i].y, 0);
    EXPECT_LE(a[i].y, 15);
  }
}

TEST(SamplePatches, TooSmallRegionThrows) {
  HsvImage img(40, 40);
  EXPECT_THROW(sample_patches(img, {0, 0, 14, 30}, 1, 0), std::invalid_argument);
}

TEST(PatchFeature, HueMeanWrapsAroundRed) {
  HsvImage img(15, 15, {350.0, 1.0, 1.0});
  for (int y = 0; y < 15; ++y)
    for (int x = 0; x < 7; ++x) img.at(x, y) = {10.0, 1.0, 1.0};
  const auto f = patch_feature(img, 0, 0, 15);
  const double hue = f[0] * 360.0;
  EXPECT_TRUE(hue < 10.0 || hue > 350.0) << hue;
}

TEST(ColorBow, HistogramOverPatchCodewords) {
  HsvImage img(30, 30, kRed);
  for (int y = 0; y < 30; ++y)
    for (int x = 15; x < 30; ++x) img.at(x, y) = kCyan;
  Codebook cb;
  cb.centroids = {{0.0, 1.0, 1.0}, {0.5, 1.0, 1.0}};
  const auto d = color_bow(img, {0, 0, 15, 30}, cb, 40, 1);
  ASSERT_EQ(d.size(), 2u);
  EXPECT_DOUBLE_EQ(d[0], 1.0);
  EXPECT_TRUE(is_valid_descriptor(color_bow(img, {0, 0, 30, 30}, cb, 200, 2)));
}

TEST(DescriptorCache, JsonLinesRoundTrip) {
  DescriptorCache c;
  c.feature = "hsv";
  c.put("img1", "top", PartDescriptor({0.25, 0.75}));
  c.put("img1", "bottom", PartDescriptor({1.0, 0.0}));
  const auto back = DescriptorCache::from_jsonl(c.to_jsonl());
  EXPECT_EQ(back.size(), 2u);
  EXPECT_EQ(back.feature, "hsv");
  ASSERT_NE(back.find("img1", "top"), nullptr);
  EXPECT_EQ(*back.find("img1", "top"), PartDescriptor({0.25, 0.75}));
  EXPECT_EQ(back.find("img2", "top"), nullptr);
}
