#pragma once

#include <string>
#include <utility>
#include <vector>

#include "outfit/descriptor.hpp"
#include "outfit/metric.hpp"

namespace outfit {

struct RankedEntry {
  std::string id;
  double distance = 0.0;
  friend bool operator==(const RankedEntry&, const RankedEntry&) = default;
};

struct RankedList {
  std::string query_id;
  std::vector<RankedEntry> entries;  // ascending distance, ties by id
  std::size_t k = 0;                 // requested size
  bool truncated = false;            // k exceeded the index size
};

/// Exact linear-scan index over inventory descriptors. Immutable after
/// construction; queries may run concurrently.
class InventoryIndex {
 public:
  /// Throws std::invalid_argument on an empty inventory, a duplicate id or
  /// mixed dimensions.
  InventoryIndex(std::vector<std::pair<std::string, PartDescriptor>> items, Metric metric);

  std::size_t size() const { return ids_.size(); }
  std::size_t dim() const { return dim_; }
  Metric metric() const { return metric_; }
  const std::string& id(std::size_t i) const { return ids_[i]; }
  const PartDescriptor& descriptor(std::size_t i) const { return descriptors_[i]; }

  /// The k nearest items. k larger than the index returns every item with
  /// `truncated` set. Throws on k == 0 or a dimension mismatch.
  RankedList query(const PartDescriptor& q, std::size_t k, std::string query_id = {}) const;

 private:
  std::vector<std::string> ids_;
  std::vector<PartDescriptor> descriptors_;
  std::size_t dim_ = 0;
  Metric metric_;
};

/// Round-robin merge of several ranked lists, skipping ids already taken,
/// truncated to k entries.
RankedList interleave(const std::vector<RankedList>& lists, std::size_t k);

}  // namespace outfit
