#include "outfit/recommenders/pr.hpp"

#include <cstdlib>
#include <stdexcept>

namespace outfit {

namespace {

void require_hsv_layout(const PartDescriptor& d) {
  if (d.size() != kHsvDims)
    throw std::invalid_argument("perceptual retrieval needs a " + std::to_string(kHsvDims) +
                                "-dim HSV histogram, got " + std::to_string(d.size()) + " dims");
}

}  // namespace

PartDescriptor rotate_hue(const PartDescriptor& hsv, int bins) {
  require_hsv_layout(hsv);
  PartDescriptor out = hsv;
  const int n = static_cast<int>(kHueBins);
  for (int b = 0; b < n; ++b) out[static_cast<std::size_t>(((b + bins) % n + n) % n)] = hsv[b];
  return out;
}

PartDescriptor reflect_sat_val(const PartDescriptor& hsv) {
  require_hsv_layout(hsv);
  PartDescriptor out = hsv;
  for (std::size_t i = 0; i < kSatBins; ++i) out[kSatOffset + kSatBins - 1 - i] = hsv[kSatOffset + i];
  for (std::size_t i = 0; i < kValBins; ++i) out[kValOffset + kValBins - 1 - i] = hsv[kValOffset + i];
  return out;
}

std::vector<PartDescriptor> pr_transform(const PartDescriptor& hsv, PrMode mode) {
  const PartDescriptor reflected = reflect_sat_val(hsv);
  constexpr int kHalfTurn = static_cast<int>(kHueBins) / 2;
  constexpr int kThirdTurn = static_cast<int>(kHueBins) / 3;
  if (mode == PrMode::Complementary) return {rotate_hue(reflected, kHalfTurn)};
  return {rotate_hue(reflected, kThirdTurn), rotate_hue(reflected, -kThirdTurn)};
}

std::size_t reference_visible_part(const HolisticDescriptor& query) {
  const std::size_t hidden = query.sole_hidden_part();
  std::size_t best = query.part_count();
  std::size_t best_gap = query.part_count() + 1;
  for (std::size_t j : query.visible_parts()) {
    const std::size_t gap = j > hidden ? j - hidden : hidden - j;
    if (gap < best_gap) {
      best_gap = gap;
      best = j;
    }
  }
  if (best == query.part_count()) throw std::invalid_argument("query has no visible part");
  return best;
}

std::vector<PartDescriptor> pr_transform(const HolisticDescriptor& query, PrMode mode) {
  return pr_transform(query.parts[reference_visible_part(query)], mode);
}

PrMode parse_pr_mode(const std::string& name) {
  if (name == "complementary") return PrMode::Complementary;
  if (name == "triad") return PrMode::Triad;
  throw std::invalid_argument("unknown PR mode '" + name + "' (expected complementary or triad)");
}

std::string to_string(PrMode m) { return m == PrMode::Complementary ? "complementary" : "triad"; }

}  // namespace outfit
