#include "outfit/index.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <stdexcept>

namespace outfit {

InventoryIndex::InventoryIndex(std::vector<std::pair<std::string, PartDescriptor>> items, Metric metric)
    : metric_(metric) {
  if (items.empty()) throw std::invalid_argument("index: empty inventory");
  dim_ = items.front().second.size();
  std::set<std::string> seen;
  ids_.reserve(items.size());
  descriptors_.reserve(items.size());
  for (auto& [id, d] : items) {
    if (d.size() != dim_)
      throw std::invalid_argument("index: item '" + id + "' has dimension " + std::to_string(d.size()) +
                                  ", expected " + std::to_string(dim_));
    if (!seen.insert(id).second) throw std::invalid_argument("index: duplicate id '" + id + "'");
    ids_.push_back(std::move(id));
    descriptors_.push_back(std::move(d));
  }
}

RankedList InventoryIndex::query(const PartDescriptor& q, std::size_t k, std::string query_id) const {
  if (k == 0) throw std::invalid_argument("index: k must be at least 1");
  if (q.size() != dim_)
    throw std::invalid_argument("index: query has dimension " + std::to_string(q.size()) + ", index has " +
                                std::to_string(dim_));
  std::vector<double> dist(size());
  for (std::size_t i = 0; i < size(); ++i) dist[i] = distance(metric_, q.values, descriptors_[i].values);

  RankedList out;
  out.query_id = std::move(query_id);
  out.k = k;
  out.truncated = k > size();
  const std::size_t take = std::min(k, size());

  std::vector<std::size_t> order(size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(take), order.end(),
                    [&](std::size_t a, std::size_t b) {
                      return dist[a] < dist[b] || (dist[a] == dist[b] && ids_[a] < ids_[b]);
                    });
  out.entries.reserve(take);
  for (std::size_t r = 0; r < take; ++r) out.entries.push_back({ids_[order[r]], dist[order[r]]});
  return out;
}

RankedList interleave(const std::vector<RankedList>& lists, std::size_t k) {
  RankedList out;
  out.k = k;
  if (lists.empty()) return out;
  out.query_id = lists.front().query_id;
  std::set<std::string> taken;
  for (std::size_t rank = 0; out.entries.size() < k; ++rank) {
    bool any = false;
    for (const auto& l : lists) {
      if (rank >= l.entries.size()) continue;
      any = true;
      if (taken.insert(l.entries[rank].id).second) {
        out.entries.push_back(l.entries[rank]);
        if (out.entries.size() == k) break;
      }
    }
    if (!any) break;
  }
  return out;
}

}  // namespace outfit
