#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "outfit/codebook.hpp"
#include "outfit/corpus.hpp"
#include "outfit/descriptor.hpp"

namespace outfit {

/// Hue in degrees [0, 360); saturation and value in [0, 1].
struct HsvPixel {
  double h = 0.0;
  double s = 0.0;
  double v = 0.0;
};

HsvPixel rgb_to_hsv(double r, double g, double b);

struct HsvImage {
  int width = 0;
  int height = 0;
  std::vector<HsvPixel> pixels;  // row-major

  HsvImage() = default;
  HsvImage(int w, int h, HsvPixel fill = {});

  const HsvPixel& at(int x, int y) const { return pixels[static_cast<std::size_t>(y) * width + x]; }
  HsvPixel& at(int x, int y) { return pixels[static_cast<std::size_t>(y) * width + x]; }

  // Copies of the pixels inside `box`, row-major. Throws if the box is empty
  // or leaves the image.
  std::vector<HsvPixel> region(const Box& box) const;
};

std::size_t hue_bin(double h);
std::size_t unit_bin(double x, std::size_t bins);

/// 40-dim descriptor: hue, saturation and value histograms, each normalised
/// to unit mass and scaled by 1/3. Throws on an empty region.
PartDescriptor hsv_histogram(std::span<const HsvPixel> pixels);

struct Patch {
  int x = 0;  // top-left corner relative to the region
  int y = 0;
  Vector values;  // circular-mean hue / 360, mean saturation, mean value
};

inline constexpr int kPatchSize = 15;
inline constexpr std::size_t kDefaultPatchCount = 200;

/// Draws `count` patches of `patch_size`^2 uniformly inside `box`.
/// Throws when the box is smaller than one patch.
std::vector<Patch> sample_patches(const HsvImage& image, const Box& box, std::size_t count,
                                  std::uint64_t seed, int patch_size = kPatchSize);

Vector patch_feature(const HsvImage& image, int x0, int y0, int patch_size);

/// Colour bag-of-words: normalised histogram of codeword assignments of the
/// sampled patches.
PartDescriptor color_bow(const HsvImage& image, const Box& box, const Codebook& patch_codebook,
                         std::size_t count, std::uint64_t seed);

/// Per-(image id, part name) descriptors, persisted as JSON lines.
class DescriptorCache {
 public:
  using Key = std::pair<std::string, std::string>;

  void put(const std::string& image_id, const std::string& part, PartDescriptor d);
  const PartDescriptor* find(const std::string& image_id, const std::string& part) const;
  bool contains(const std::string& image_id, const std::string& part) const {
    return find(image_id, part) != nullptr;
  }
  std::size_t size() const { return entries_.size(); }
  const std::map<Key, PartDescriptor>& entries() const { return entries_; }

  std::string feature;  // "hsv" or "bow"

  std::string to_jsonl() const;
  static DescriptorCache from_jsonl(const std::string& text);
  static DescriptorCache load(const std::filesystem::path& path);

 private:
  std::map<Key, PartDescriptor> entries_;
};

}  // namespace outfit
