#include "outfit/codebook.hpp"

#include <algorithm>
#include <limits>
#include <random>
#include <set>
#include <stdexcept>

#include "outfit/descriptor.hpp"
#include "outfit/io.hpp"

namespace outfit {

namespace {

std::size_t nearest(const Vector& v, const std::vector<Vector>& centroids, double* dist = nullptr) {
  std::size_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < centroids.size(); ++c) {
    const double d = squared_l2_distance(v, centroids[c]);
    if (d < best_d) {
      best_d = d;
      best = c;
    }
  }
  if (dist) *dist = best_d;
  return best;
}

std::vector<Vector> seed_plus_plus(const std::vector<Vector>& points, std::size_t k,
                                   std::mt19937_64& rng) {
  std::vector<Vector> centers;
  centers.reserve(k);
  std::uniform_int_distribution<std::size_t> pick(0, points.size() - 1);
  centers.push_back(points[pick(rng)]);

  std::vector<double> d2(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) d2[i] = squared_l2_distance(points[i], centers[0]);

  while (centers.size() < k) {
    double total = 0.0;
    for (double d : d2) total += d;
    std::size_t chosen = 0;
    if (total > 0.0) {
      std::uniform_real_distribution<double> u(0.0, total);
      double r = u(rng);
      chosen = points.size() - 1;
      for (std::size_t i = 0; i < points.size(); ++i) {
        if (d2[i] <= 0.0) continue;
        r -= d2[i];
        if (r <= 0.0) {
          chosen = i;
          break;
        }
      }
      // Rounding can leave r slightly positive; fall back to the last
      // candidate with positive mass.
      if (d2[chosen] <= 0.0) {
        for (std::size_t i = points.size(); i-- > 0;)
          if (d2[i] > 0.0) {
            chosen = i;
            break;
          }
      }
    } else {
      chosen = pick(rng);
    }
    centers.push_back(points[chosen]);
    for (std::size_t i = 0; i < points.size(); ++i)
      d2[i] = std::min(d2[i], squared_l2_distance(points[i], centers.back()));
  }
  return centers;
}

}  // namespace

std::size_t count_distinct(const std::vector<Vector>& points) {
  return std::set<Vector>(points.begin(), points.end()).size();
}

KMeansResult kmeans(const std::vector<Vector>& points, std::size_t k, std::uint64_t seed,
                    const KMeansOptions& options) {
  if (k == 0) throw std::invalid_argument("kmeans: k must be positive");
  if (points.empty()) throw std::invalid_argument("kmeans: no input points");
  const std::size_t dim = points.front().size();
  for (const auto& p : points)
    if (p.size() != dim) throw std::invalid_argument("kmeans: inconsistent dimensions");
  if (count_distinct(points) < k)
    throw std::invalid_argument("kmeans: fewer than " + std::to_string(k) + " distinct inputs");

  std::mt19937_64 rng(seed);
  KMeansResult res;
  res.centroids = seed_plus_plus(points, k, rng);
  res.assignment.assign(points.size(), 0);
  std::vector<double> dist(points.size());

  for (std::size_t it = 0; it < options.max_iterations; ++it) {
    double inertia = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
      res.assignment[i] = nearest(points[i], res.centroids, &dist[i]);
      inertia += dist[i];
    }
    res.iterations = it + 1;
    if (!res.inertia_history.empty()) {
      const double prev = res.inertia_history.back();
      res.inertia_history.push_back(inertia);
      if (prev <= 0.0 || (prev - inertia) / prev < options.relative_tolerance) {
        res.converged = true;
        break;
      }
    } else {
      res.inertia_history.push_back(inertia);
      if (inertia == 0.0) {
        res.converged = true;
        break;
      }
    }
    if (it + 1 == options.max_iterations) break;

    std::vector<Vector> sums(k, Vector(dim, 0.0));
    std::vector<std::size_t> counts(k, 0);
    for (std::size_t i = 0; i < points.size(); ++i) {
      auto& s = sums[res.assignment[i]];
      for (std::size_t d = 0; d < dim; ++d) s[d] += points[i][d];
      ++counts[res.assignment[i]];
    }
    for (std::size_t c = 0; c < k; ++c) {
      if (counts[c] == 0) continue;
      for (std::size_t d = 0; d < dim; ++d) res.centroids[c][d] = sums[c][d] / counts[c];
    }
    for (std::size_t c = 0; c < k; ++c) {
      if (counts[c] != 0) continue;
      std::size_t far = 0;
      double far_d = -1.0;
      for (std::size_t i = 0; i < points.size(); ++i) {
        const double d = squared_l2_distance(points[i], res.centroids[res.assignment[i]]);
        if (d > far_d) {
          far_d = d;
          far = i;
        }
      }
      res.centroids[c] = points[far];
      res.assignment[far] = c;
    }
  }
  return res;
}

CodebookTraining train_codebook(const std::vector<Vector>& inputs, std::size_t k,
                                std::uint64_t seed, const KMeansOptions& options) {
  if (k < 2) throw std::invalid_argument("codebook size must be at least 2");
  KMeansResult km = kmeans(inputs, k, seed, options);
  CodebookTraining out;
  out.codebook.centroids = std::move(km.centroids);
  out.inertia_history = std::move(km.inertia_history);
  out.iterations = km.iterations;

  std::string bytes;
  for (const auto& v : inputs)
    bytes.append(reinterpret_cast<const char*>(v.data()), v.size() * sizeof(double));
  out.codebook.trained_on = fingerprint(bytes);
  return out;
}

std::size_t quantize(const Vector& v, const Codebook& cb) {
  if (cb.centroids.empty()) throw std::invalid_argument("quantize: empty codebook");
  if (v.size() != cb.dim())
    throw std::invalid_argument("quantize: descriptor has dimension " + std::to_string(v.size()) +
                                ", codebook expects " + std::to_string(cb.dim()));
  return nearest(v, cb.centroids);
}

nlohmann::json codebook_to_json(const Codebook& cb) {
  return {{"version", 1},
          {"K", cb.size()},
          {"dim", cb.dim()},
          {"trained_on", cb.trained_on},
          {"centroids", cb.centroids}};
}

Codebook codebook_from_json(const nlohmann::json& j) {
  if (j.value("version", 0) != 1) throw std::invalid_argument("codebook: unsupported version");
  Codebook cb;
  cb.centroids = j.at("centroids").get<std::vector<Vector>>();
  cb.trained_on = j.value("trained_on", std::string{});
  if (cb.size() != j.at("K").get<std::size_t>() || cb.size() < 2)
    throw std::invalid_argument("codebook: K does not match centroid count");
  for (const auto& c : cb.centroids)
    if (c.size() != j.at("dim").get<std::size_t>())
      throw std::invalid_argument("codebook: centroid dimension mismatch");
  return cb;
}

}  // namespace outfit
