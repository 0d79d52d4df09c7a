#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "outfit/codebook.hpp"
#include "outfit/descriptor.hpp"

namespace outfit {

/// Diagonal-covariance Gaussian mixture over P-dimensional codeword-index
/// vectors. Indices are treated as real coordinates.
struct GmmModel {
  std::vector<double> weights;              // M
  std::vector<std::vector<double>> means;   // M x P
  std::vector<std::vector<double>> variances;  // M x P, each >= floor

  std::size_t components() const { return weights.size(); }
  std::size_t dims() const { return means.empty() ? 0 : means.front().size(); }
};

struct GmmOptions {
  std::size_t max_iterations = 500;
  double relative_tolerance = 1e-6;  // on log-likelihood change
  double variance_floor = 1e-4;
};

struct GmmTraining {
  GmmModel model;
  std::vector<double> log_likelihood;  // total data log-likelihood before each M-step
  std::size_t iterations = 0;
  bool converged = false;
  std::vector<std::string> warnings;
};

/// EM started from a k-means++ clustering (one M-step on its hard assignment). Throws when n < M, the rows are ragged, or
/// `data` is empty.
GmmTraining gmm_train(const std::vector<std::vector<double>>& data, std::size_t components,
                      std::uint64_t seed, const GmmOptions& options = {});

/// log p(x | model), computed with log-sum-exp.
double gmm_log_density(const GmmModel& model, const std::vector<double>& x);

struct GmmInference {
  std::size_t missing_part = 0;
  std::size_t codeword = 0;
  std::vector<double> log_scores;  // one per candidate codeword
};

/// Fills the single missing coordinate with every codeword in [0, K) and keeps
/// the maximiser of p(H | model), lowest codeword on ties (log scores within
/// 1e-12). Throws unless exactly one coordinate is missing and the query has
/// the model's dimension.
GmmInference gmm_infer(const GmmModel& model, const std::vector<std::optional<std::size_t>>& query,
                       std::size_t codebook_size);

/// Quantises the visible parts, infers the hidden codeword and returns its
/// centroid.
PartDescriptor gmm_recommend(const GmmModel& model, const Codebook& codebook,
                             const HolisticDescriptor& query, std::size_t* codeword = nullptr);

}  // namespace outfit
