#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace outfit {

using Vector = std::vector<double>;

struct KMeansOptions {
  std::size_t max_iterations = 300;
  double relative_tolerance = 1e-4;  // on inertia change between iterations
};

struct KMeansResult {
  std::vector<Vector> centroids;
  std::vector<std::size_t> assignment;   // per input point
  std::vector<double> inertia_history;   // one entry per assignment step
  std::size_t iterations = 0;
  bool converged = false;
};

/// Lloyd's k-means under squared L2 with k-means++ seeding. Empty clusters are
/// re-seeded at the point farthest from its centroid. Throws
/// std::invalid_argument when fewer than k distinct points are given.
KMeansResult kmeans(const std::vector<Vector>& points, std::size_t k, std::uint64_t seed,
                    const KMeansOptions& options = {});

std::size_t count_distinct(const std::vector<Vector>& points);

/// K centroids shared by every part; maps a descriptor to a codeword index.
struct Codebook {
  std::vector<Vector> centroids;
  std::string trained_on;  // fingerprint of the training inputs

  std::size_t size() const { return centroids.size(); }
  std::size_t dim() const { return centroids.empty() ? 0 : centroids.front().size(); }
};

struct CodebookTraining {
  Codebook codebook;
  std::vector<double> inertia_history;
  std::size_t iterations = 0;
};

CodebookTraining train_codebook(const std::vector<Vector>& inputs, std::size_t k,
                                std::uint64_t seed, const KMeansOptions& options = {});

/// Nearest centroid under L2, lowest index on ties. Throws on dimension mismatch.
std::size_t quantize(const Vector& v, const Codebook& cb);

nlohmann::json codebook_to_json(const Codebook& cb);
Codebook codebook_from_json(const nlohmann::json& j);

}  // namespace outfit
