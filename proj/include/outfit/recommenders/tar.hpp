#pragma once

#include <cstdint>
#include <string>

#include "outfit/descriptor.hpp"

namespace outfit {

enum class TarMode { Uniform, Peaked };

/// Training-free query: Uniform draws `dims` values from U[0,1] and normalises
/// them; Peaked returns a solid colour (one random hue bin, top saturation and
/// value bins) and requires the 40-dim HSV layout.
PartDescriptor tar_transform(std::size_t dims, std::uint64_t seed, TarMode mode = TarMode::Uniform);

TarMode parse_tar_mode(const std::string& name);
std::string to_string(TarMode m);

enum class PatternClass { Solid, Patterned };

inline constexpr double kDefaultSolidThreshold = 0.5;

/// Solid when the largest bin holds at least `threshold` of the hue
/// histogram's mass. Non-HSV descriptors are judged on their full histogram.
PatternClass solid_pattern_classify(const PartDescriptor& d,
                                    double threshold = kDefaultSolidThreshold);
double hue_concentration(const PartDescriptor& d);

std::string to_string(PatternClass c);

}  // namespace outfit
