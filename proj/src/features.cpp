#include "outfit/features.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>

#include "outfit/io.hpp"

namespace outfit {

HsvPixel rgb_to_hsv(double r, double g, double b) {
  const double mx = std::max({r, g, b});
  const double mn = std::min({r, g, b});
  const double delta = mx - mn;
  HsvPixel p;
  p.v = mx;
  p.s = mx > 0.0 ? delta / mx : 0.0;
  if (delta > 0.0) {
    double h;
    if (mx == r)
      h = 60.0 * std::fmod((g - b) / delta, 6.0);
    else if (mx == g)
      h = 60.0 * ((b - r) / delta + 2.0);
    else
      h = 60.0 * ((r - g) / delta + 4.0);
    if (h < 0.0) h += 360.0;
    if (h >= 360.0) h -= 360.0;
    p.h = h;
  }
  return p;
}

HsvImage::HsvImage(int w, int h, HsvPixel fill)
    : width(w), height(h), pixels(static_cast<std::size_t>(w) * h, fill) {
  if (w <= 0 || h <= 0) throw std::invalid_argument("image dimensions must be positive");
}

std::vector<HsvPixel> HsvImage::region(const Box& box) const {
  if (box.w <= 0 || box.h <= 0) throw std::invalid_argument("empty region");
  if (box.x < 0 || box.y < 0 || box.x + box.w > width || box.y + box.h > height)
    throw std::invalid_argument("region exceeds image bounds");
  std::vector<HsvPixel> out;
  out.reserve(static_cast<std::size_t>(box.w) * box.h);
  for (int y = box.y; y < box.y + box.h; ++y)
    for (int x = box.x; x < box.x + box.w; ++x) out.push_back(at(x, y));
  return out;
}

std::size_t hue_bin(double h) {
  h = std::fmod(h, 360.0);
  if (h < 0.0) h += 360.0;
  return std::min(static_cast<std::size_t>(h / (360.0 / kHueBins)), kHueBins - 1);
}

std::size_t unit_bin(double x, std::size_t bins) {
  if (!(x > 0.0)) return 0;
  return std::min(static_cast<std::size_t>(x * static_cast<double>(bins)), bins - 1);
}

PartDescriptor hsv_histogram(std::span<const HsvPixel> pixels) {
  if (pixels.empty()) throw std::invalid_argument("hsv_histogram: empty region");
  std::vector<double> out(kHsvDims, 0.0);
  for (const auto& p : pixels) {
    out[hue_bin(p.h)] += 1.0;
    out[kSatOffset + unit_bin(p.s, kSatBins)] += 1.0;
    out[kValOffset + unit_bin(p.v, kValBins)] += 1.0;
  }
  const double scale = 1.0 / (3.0 * static_cast<double>(pixels.size()));
  for (double& v : out) v *= scale;
  return PartDescriptor(std::move(out));
}

Vector patch_feature(const HsvImage& image, int x0, int y0, int patch_size) {
  double sx = 0.0, sy = 0.0, ss = 0.0, sv = 0.0;
  for (int y = y0; y < y0 + patch_size; ++y) {
    for (int x = x0; x < x0 + patch_size; ++x) {
      const auto& p = image.at(x, y);
      const double rad = p.h * std::numbers::pi / 180.0;
      sx += std::cos(rad);
      sy += std::sin(rad);
      ss += p.s;
      sv += p.v;
    }
  }
  const double n = static_cast<double>(patch_size) * patch_size;
  double hue = std::atan2(sy, sx) * 180.0 / std::numbers::pi;
  if (hue < 0.0) hue += 360.0;
  if (hue >= 360.0) hue = 0.0;
  return {hue / 360.0, ss / n, sv / n};
}

std::vector<Patch> sample_patches(const HsvImage& image, const Box& box, std::size_t count,
                                  std::uint64_t seed, int patch_size) {
  if (box.x < 0 || box.y < 0 || box.x + box.w > image.width || box.y + box.h > image.height)
    throw std::invalid_argument("sample_patches: region exceeds image bounds");
  if (box.w < patch_size || box.h < patch_size)
    throw std::invalid_argument("sample_patches: region " + std::to_string(box.w) + "x" +
                                std::to_string(box.h) + " is smaller than a " +
                                std::to_string(patch_size) + "x" + std::to_string(patch_size) +
                                " patch");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> dx(0, box.w - patch_size);
  std::uniform_int_distribution<int> dy(0, box.h - patch_size);
  std::vector<Patch> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    Patch p;
    p.x = dx(rng);
    p.y = dy(rng);
    p.values = patch_feature(image, box.x + p.x, box.y + p.y, patch_size);
    out.push_back(std::move(p));
  }
  return out;
}

PartDescriptor color_bow(const HsvImage& image, const Box& box, const Codebook& patch_codebook,
                         std::size_t count, std::uint64_t seed) {
  if (count == 0) throw std::invalid_argument("color_bow: patch count must be positive");
  std::vector<double> hist(patch_codebook.size(), 0.0);
  for (const auto& p : sample_patches(image, box, count, seed)) hist[quantize(p.values, patch_codebook)] += 1.0;
  for (double& v : hist) v /= static_cast<double>(count);
  return PartDescriptor(std::move(hist));
}

void DescriptorCache::put(const std::string& image_id, const std::string& part, PartDescriptor d) {
  entries_[{image_id, part}] = std::move(d);
}

const PartDescriptor* DescriptorCache::find(const std::string& image_id,
                                            const std::string& part) const {
  const auto it = entries_.find({image_id, part});
  return it == entries_.end() ? nullptr : &it->second;
}

std::string DescriptorCache::to_jsonl() const {
  std::string out;
  for (const auto& [key, d] : entries_) {
    nlohmann::json j = {{"image_id", key.first}, {"part", key.second}, {"feature", feature},
                        {"values", d.values}};
    out += j.dump();
    out += '\n';
  }
  return out;
}

DescriptorCache DescriptorCache::from_jsonl(const std::string& text) {
  DescriptorCache cache;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      cache.feature = j.value("feature", cache.feature);
      cache.put(j.at("image_id").get<std::string>(), j.at("part").get<std::string>(),
                PartDescriptor(j.at("values").get<std::vector<double>>()));
    } catch (const nlohmann::json::exception& e) {
      throw DataError("descriptor cache line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return cache;
}

DescriptorCache DescriptorCache::load(const std::filesystem::path& path) {
  return from_jsonl(read_file(path));
}

}  // namespace outfit
