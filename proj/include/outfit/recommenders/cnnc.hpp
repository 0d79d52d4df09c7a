#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "outfit/descriptor.hpp"
#include "outfit/metric.hpp"

namespace outfit {

/// The nearest training images on the visible parts, ascending by distance
/// with ties to the lower training index.
struct NeighborSet {
  std::vector<std::size_t> indices;    // into the training set
  std::vector<double> distances;
  std::vector<PartDescriptor> hidden;  // each neighbour's hidden-part descriptor
  std::size_t size() const { return indices.size(); }
};

/// Sums per-part distances over the query's visible parts. Throws on an empty
/// training set, k == 0, k > n_train, or a training image lacking a needed part.
NeighborSet cnnc_neighbors(const HolisticDescriptor& query,
                           const std::vector<HolisticDescriptor>& train, std::size_t k,
                           Metric metric = Metric::L1);

/// Element-wise mean of the neighbours' hidden descriptors.
PartDescriptor cnnc_consensus(const NeighborSet& neighbors);

struct DiverseSelection {
  std::vector<std::size_t> members;  // positions within the neighbour set
  std::vector<PartDescriptor> descriptors;
  std::vector<std::string> warnings;
};

/// Clusters the hidden descriptors into d groups with k-means and returns each
/// group's medoid (member nearest its centroid), ordered by neighbour rank.
/// When fewer than d distinct descriptors exist the remainder is padded with
/// the best-ranked unused neighbours and a warning is recorded.
DiverseSelection cnnc_diverse(const NeighborSet& neighbors, std::size_t d, std::uint64_t seed);

}  // namespace outfit
