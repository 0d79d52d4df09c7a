#pragma once

#include <vector>

#include "outfit/descriptor.hpp"

namespace outfit {

enum class PrMode { Complementary, Triad };

/// Hue-wheel rotation of an HSV histogram. Complementary shifts hue by 180
/// degrees (12 bins) and yields one descriptor; triad yields +120 and -120
/// degree shifts (+8, -8 bins). Saturation and value histograms are
/// bin-reversed in every output. Throws unless the input is 40-dim.
std::vector<PartDescriptor> pr_transform(const PartDescriptor& hsv, PrMode mode);

/// Transforms the visible part nearest to the single hidden part.
std::vector<PartDescriptor> pr_transform(const HolisticDescriptor& query, PrMode mode);

// Visible part used as the query garment: the one closest in chain order to
// the hidden part, lower index on ties.
std::size_t reference_visible_part(const HolisticDescriptor& query);

PartDescriptor rotate_hue(const PartDescriptor& hsv, int bins);
PartDescriptor reflect_sat_val(const PartDescriptor& hsv);

PrMode parse_pr_mode(const std::string& name);
std::string to_string(PrMode m);

}  // namespace outfit
