#include "outfit/cli/synth.hpp"

#include <random>
#include <sstream>

#include <opencv2/imgcodecs.hpp>
#include <opencv2/imgproc.hpp>

#include "outfit/eval.hpp"
#include "outfit/io.hpp"

namespace outfit::cli {

namespace fs = std::filesystem;

namespace {

constexpr int kPalette = 6;

cv::Vec3b hsv_to_bgr(double hue, double sat, double val) {
  cv::Mat px(1, 1, CV_32FC3, cv::Scalar(hue, sat, val)), bgr;
  cv::cvtColor(px, bgr, cv::COLOR_HSV2BGR);
  const auto c = bgr.at<cv::Vec3f>(0, 0);
  return {cv::saturate_cast<uchar>(c[0] * 255), cv::saturate_cast<uchar>(c[1] * 255),
          cv::saturate_cast<uchar>(c[2] * 255)};
}

// Bottom colour paired with each top colour; a permutation of the palette.
int paired_colour(int top) { return (top * 5 + 2) % kPalette; }

}  // namespace

nlohmann::json synthesize_corpus(const SynthOptions& o) {
  fs::create_directories(o.out / "images");
  std::mt19937_64 rng(o.seed);
  std::uniform_int_distribution<int> width(200, 260), extra(180, 260), colour(0, kPalette - 1), stripe(6, 14);
  std::uniform_real_distribution<double> jitter(-6.0, 6.0), unit(0.0, 1.0);

  std::ostringstream manifest;
  std::vector<std::pair<std::string, bool>> ids;  // id, patterned top
  for (std::size_t i = 0; i < o.count; ++i) {
    const int w = width(rng);
    const int h = std::max(400, w + extra(rng));
    const int top = colour(rng);
    const int bottom = paired_colour(top);
    const bool patterned = unit(rng) < o.patterned_fraction;
    const double top_hue = 60.0 * top + 30.0 + jitter(rng);
    const double bottom_hue = 60.0 * bottom + 30.0 + jitter(rng);

    cv::Mat img(h, w, CV_8UC3, cv::Scalar(235, 235, 235));
    const cv::Rect top_box(10, 10, w - 20, h / 2 - 20);
    const cv::Rect bottom_box(10, h / 2 + 10, w - 20, h / 2 - 20);
    img(top_box).setTo(hsv_to_bgr(top_hue, 0.9, 0.9));
    if (patterned) {
      const int period = stripe(rng);
      const auto accent = hsv_to_bgr(std::fmod(top_hue + 120.0 + 360.0, 360.0), 0.8, 0.95);
      for (int y = top_box.y; y < top_box.y + top_box.height; y += 2 * period)
        img(cv::Rect(top_box.x, y, top_box.width, std::min(period, top_box.y + top_box.height - y))).setTo(accent);
    }
    img(bottom_box).setTo(hsv_to_bgr(bottom_hue, 0.85, 0.8));

    std::ostringstream id;
    id << "toy" << std::setw(5) << std::setfill('0') << i;
    const std::string rel = "images/" + id.str() + ".png";
    cv::imwrite((o.out / rel).string(), img);

    nlohmann::json rec = {
        {"id", id.str()},
        {"image_path", rel},
        {"width", w},
        {"height", h},
        {"parts",
         {{{"part_name", "top"}, {"box", {top_box.x, top_box.y, top_box.width, top_box.height}}},
          {{"part_name", "bottom"}, {"box", {bottom_box.x, bottom_box.y, bottom_box.width, bottom_box.height}}}}},
        {"tags", {patterned ? "patterned" : "solid"}},
        {"user_id", "user" + std::to_string(i % 17)},
        {"brand", nullptr}};
    manifest << rec.dump() << '\n';
    ids.emplace_back(id.str(), patterned);
  }
  write_file_atomic(o.out / "manifest.jsonl", manifest.str());

  RatingsTable ratings;
  ratings.algorithms = {"pr", "cnnc", "gmm", "mcl", "tar"};
  std::vector<std::size_t> order(ids.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::shuffle(order.begin(), order.end(), rng);
  std::uniform_int_distribution<int> rating(kMinRating, kMaxRating);
  for (std::size_t q = 0; q < std::min(o.rated_queries, ids.size()); ++q) {
    const auto& [qid, patterned] = ids[order[q]];
    std::vector<int> consensus(ratings.algorithms.size());
    for (int& c : consensus) c = rating(rng);
    for (std::size_t r = 0; r < o.raters; ++r) {
      RatingRecord rec{qid, "rater" + std::to_string(r), consensus,
                       patterned ? PatternClass::Patterned : PatternClass::Solid};
      for (int& v : rec.ratings)
        if (unit(rng) < 0.3) v = rating(rng);
      ratings.records.push_back(std::move(rec));
    }
  }
  write_file_atomic(o.out / "ratings.csv", ratings_to_csv(ratings));

  return {{"images", o.count},
          {"manifest", (o.out / "manifest.jsonl").string()},
          {"ratings", (o.out / "ratings.csv").string()},
          {"rated_queries", std::min(o.rated_queries, ids.size())}};
}

}  // namespace outfit::cli
