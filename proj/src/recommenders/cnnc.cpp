#include "outfit/recommenders/cnnc.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "outfit/codebook.hpp"

namespace outfit {

NeighborSet cnnc_neighbors(const HolisticDescriptor& query,
                           const std::vector<HolisticDescriptor>& train, std::size_t k,
                           Metric metric) {
  if (train.empty()) throw std::invalid_argument("cnnc: empty training set");
  if (k == 0 || k > train.size())
    throw std::invalid_argument("cnnc: neighbour count " + std::to_string(k) +
                                " outside [1, " + std::to_string(train.size()) + "]");
  const std::size_t hidden = query.sole_hidden_part();
  const auto visible = query.visible_parts();

  std::vector<double> dist(train.size(), 0.0);
  for (std::size_t i = 0; i < train.size(); ++i) {
    const auto& t = train[i];
    if (t.parts.size() != query.parts.size() || t.parts[hidden].empty())
      throw std::invalid_argument("cnnc: training image " + std::to_string(i) +
                                  " lacks the hidden part");
    for (std::size_t j : visible) {
      if (t.parts[j].empty())
        throw std::invalid_argument("cnnc: training image " + std::to_string(i) +
                                    " lacks visible part " + std::to_string(j));
      dist[i] += distance(metric, query.parts[j].values, t.parts[j].values);
    }
  }

  std::vector<std::size_t> order(train.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k), order.end(),
                    [&](std::size_t a, std::size_t b) {
                      return dist[a] < dist[b] || (dist[a] == dist[b] && a < b);
                    });

  NeighborSet out;
  for (std::size_t r = 0; r < k; ++r) {
    out.indices.push_back(order[r]);
    out.distances.push_back(dist[order[r]]);
    out.hidden.push_back(train[order[r]].parts[hidden]);
  }
  return out;
}

PartDescriptor cnnc_consensus(const NeighborSet& neighbors) {
  if (neighbors.hidden.empty()) throw std::invalid_argument("cnnc_consensus: no neighbours");
  const std::size_t dim = neighbors.hidden.front().size();
  std::vector<double> sum(dim, 0.0);
  for (const auto& h : neighbors.hidden) {
    if (h.size() != dim) throw std::invalid_argument("cnnc_consensus: dimension mismatch");
    for (std::size_t i = 0; i < dim; ++i) sum[i] += h[i];
  }
  const double n = static_cast<double>(neighbors.hidden.size());
  for (double& v : sum) v /= n;
  return PartDescriptor(std::move(sum));
}

DiverseSelection cnnc_diverse(const NeighborSet& neighbors, std::size_t d, std::uint64_t seed) {
  if (d == 0) throw std::invalid_argument("cnnc_diverse: d must be positive");
  if (d > neighbors.size())
    throw std::invalid_argument("cnnc_diverse: d = " + std::to_string(d) + " exceeds " +
                                std::to_string(neighbors.size()) + " neighbours");
  std::vector<Vector> points;
  points.reserve(neighbors.size());
  for (const auto& h : neighbors.hidden) points.push_back(h.values);

  const std::size_t clusters = std::min(d, count_distinct(points));
  const KMeansResult km = kmeans(points, clusters, seed);

  DiverseSelection out;
  std::vector<bool> used(points.size(), false);
  for (std::size_t c = 0; c < clusters; ++c) {
    std::size_t best = points.size();
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < points.size(); ++i) {
      if (km.assignment[i] != c) continue;
      const double dd = squared_l2_distance(points[i], km.centroids[c]);
      if (dd < best_d) {
        best_d = dd;
        best = i;
      }
    }
    if (best < points.size()) {
      out.members.push_back(best);
      used[best] = true;
    }
  }
  if (out.members.size() < d) {
    out.warnings.push_back("cnnc_diverse: only " + std::to_string(out.members.size()) +
                           " distinct clusters among neighbours; padded to " + std::to_string(d) +
                           " from remaining ranks");
    for (std::size_t i = 0; i < points.size() && out.members.size() < d; ++i) {
      if (!used[i]) {
        out.members.push_back(i);
        used[i] = true;
      }
    }
  }
  std::sort(out.members.begin(), out.members.end());
  for (std::size_t m : out.members) out.descriptors.push_back(neighbors.hidden[m]);
  return out;
}

}  // namespace outfit
