#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace outfit {

/// Layout of the 40-dim HSV colour histogram: 24 hue bins, then 8 saturation
/// bins, then 8 value bins.
inline constexpr std::size_t kHueBins = 24;
inline constexpr std::size_t kSatBins = 8;
inline constexpr std::size_t kValBins = 8;
inline constexpr std::size_t kHsvDims = kHueBins + kSatBins + kValBins;
inline constexpr std::size_t kSatOffset = kHueBins;
inline constexpr std::size_t kValOffset = kHueBins + kSatBins;

/// Nonnegative feature vector of one clothing part, normalised to unit mass.
struct PartDescriptor {
  std::vector<double> values;

  PartDescriptor() = default;
  explicit PartDescriptor(std::vector<double> v) : values(std::move(v)) {}

  std::size_t size() const { return values.size(); }
  bool empty() const { return values.empty(); }
  double operator[](std::size_t i) const { return values[i]; }
  double& operator[](std::size_t i) { return values[i]; }

  friend bool operator==(const PartDescriptor&, const PartDescriptor&) = default;
};

bool is_valid_descriptor(const PartDescriptor& d, double tol = 1e-6);

// Throws std::invalid_argument naming `what` when `d` is not a unit-mass
// nonnegative vector.
void require_valid_descriptor(const PartDescriptor& d, const std::string& what,
                              double tol = 1e-6);

/// Rescales to unit mass. All-zero input becomes uniform.
PartDescriptor normalized(std::vector<double> values);

/// Per-image concatenation of part descriptors. Hidden parts may carry an
/// empty descriptor.
struct HolisticDescriptor {
  std::vector<PartDescriptor> parts;
  std::vector<bool> visible;

  std::size_t part_count() const { return parts.size(); }
  std::vector<std::size_t> visible_parts() const;
  std::vector<std::size_t> hidden_parts() const;

  // Index of the single hidden part; throws unless exactly one part is hidden.
  std::size_t sole_hidden_part() const;
};

double l1_distance(std::span<const double> a, std::span<const double> b);
double squared_l2_distance(std::span<const double> a, std::span<const double> b);

}  // namespace outfit
