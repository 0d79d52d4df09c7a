#include "outfit/recommenders/gmm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace outfit {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double log_sum_exp(const std::vector<double>& terms) {
  const double mx = *std::max_element(terms.begin(), terms.end());
  if (mx == kNegInf) return kNegInf;
  double s = 0.0;
  for (double t : terms) s += std::exp(t - mx);
  return mx + std::log(s);
}

double component_log_density(const GmmModel& m, std::size_t c, const std::vector<double>& x) {
  double acc = 0.0;
  for (std::size_t d = 0; d < x.size(); ++d) {
    const double var = m.variances[c][d];
    const double diff = x[d] - m.means[c][d];
    acc += std::log(2.0 * std::numbers::pi * var) + diff * diff / var;
  }
  return -0.5 * acc;
}

// log w_c + log N(x | c) for every component.
std::vector<double> joint_terms(const GmmModel& m, const std::vector<double>& x) {
  std::vector<double> t(m.components());
  for (std::size_t c = 0; c < m.components(); ++c)
    t[c] = (m.weights[c] > 0.0 ? std::log(m.weights[c]) : kNegInf) + component_log_density(m, c, x);
  return t;
}

}  // namespace

double gmm_log_density(const GmmModel& model, const std::vector<double>& x) {
  if (x.size() != model.dims()) throw std::invalid_argument("gmm: dimension mismatch");
  return log_sum_exp(joint_terms(model, x));
}

GmmTraining gmm_train(const std::vector<std::vector<double>>& data, std::size_t components,
                      std::uint64_t seed, const GmmOptions& options) {
  if (components == 0) throw std::invalid_argument("gmm: component count must be positive");
  if (data.empty()) throw std::invalid_argument("gmm: empty training data");
  if (data.size() < components)
    throw std::invalid_argument("gmm: " + std::to_string(data.size()) +
                                " training rows for " + std::to_string(components) + " components");
  const std::size_t dim = data.front().size();
  for (const auto& row : data)
    if (row.size() != dim) throw std::invalid_argument("gmm: ragged training rows");
  const std::size_t n = data.size();
  const double floor = options.variance_floor;

  GmmTraining out;
  GmmModel& m = out.model;

  const std::size_t distinct = count_distinct(data);
  const std::size_t seeded = std::min(components, distinct);
  if (seeded < components)
    out.warnings.push_back("gmm: only " + std::to_string(distinct) + " distinct rows for " +
                           std::to_string(components) +
                           " components; duplicate components will share their data");
  const KMeansResult km = kmeans(data, seeded, seed);

  // One M-step from the hard k-means assignment. Duplicated components split
  // their cluster's weight evenly.
  std::vector<double> count(seeded, 0.0);
  std::vector<std::vector<double>> var(seeded, std::vector<double>(dim, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t c = km.assignment[i];
    count[c] += 1.0;
    for (std::size_t d = 0; d < dim; ++d) {
      const double diff = data[i][d] - km.centroids[c][d];
      var[c][d] += diff * diff;
    }
  }
  for (std::size_t c = 0; c < seeded; ++c)
    for (double& v : var[c]) v = std::max(count[c] > 0.0 ? v / count[c] : 0.0, floor);

  for (std::size_t c = 0; c < components; ++c) {
    const std::size_t src = c % seeded;
    const std::size_t copies = components / seeded + (src < components % seeded ? 1 : 0);
    m.weights.push_back(std::max(count[src], 1.0) / static_cast<double>(copies));
    m.means.push_back(km.centroids[src]);
    m.variances.push_back(var[src]);
  }
  const double total = std::accumulate(m.weights.begin(), m.weights.end(), 0.0);
  for (double& w : m.weights) w /= total;

  std::vector<std::vector<double>> resp(n, std::vector<double>(components));
  for (std::size_t it = 0; it < options.max_iterations; ++it) {
    // E-step.
    double ll = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      auto terms = joint_terms(m, data[i]);
      const double lse = log_sum_exp(terms);
      ll += lse;
      for (std::size_t c = 0; c < components; ++c) resp[i][c] = std::exp(terms[c] - lse);
    }
    out.iterations = it + 1;
    if (!out.log_likelihood.empty()) {
      const double prev = out.log_likelihood.back();
      out.log_likelihood.push_back(ll);
      if (std::abs(ll - prev) <= options.relative_tolerance * std::abs(prev)) {
        out.converged = true;
        break;
      }
    } else {
      out.log_likelihood.push_back(ll);
    }
    if (it + 1 == options.max_iterations) break;

    // M-step; variances clamp at the floor, which is the constrained maximiser.
    for (std::size_t c = 0; c < components; ++c) {
      double nk = 0.0;
      for (std::size_t i = 0; i < n; ++i) nk += resp[i][c];
      m.weights[c] = nk / static_cast<double>(n);
      if (nk <= std::numeric_limits<double>::min()) continue;  // dead component keeps its shape
      for (std::size_t d = 0; d < dim; ++d) {
        double mu = 0.0;
        for (std::size_t i = 0; i < n; ++i) mu += resp[i][c] * data[i][d];
        mu /= nk;
        double s2 = 0.0;
        for (std::size_t i = 0; i < n; ++i) s2 += resp[i][c] * (data[i][d] - mu) * (data[i][d] - mu);
        m.means[c][d] = mu;
        m.variances[c][d] = std::max(s2 / nk, floor);
      }
    }
  }
  if (distinct == 1 && components > 1)
    out.warnings.push_back("gmm: degenerate data (all rows identical); variances floored");
  return out;
}

GmmInference gmm_infer(const GmmModel& model, const std::vector<std::optional<std::size_t>>& query,
                       std::size_t codebook_size) {
  if (query.size() != model.dims())
    throw std::invalid_argument("gmm_infer: query has " + std::to_string(query.size()) +
                                " parts, model has " + std::to_string(model.dims()));
  if (codebook_size == 0) throw std::invalid_argument("gmm_infer: empty codebook");
  std::size_t missing = query.size();
  std::size_t missing_count = 0;
  for (std::size_t j = 0; j < query.size(); ++j) {
    if (!query[j]) {
      missing = j;
      ++missing_count;
    }
  }
  if (missing_count != 1)
    throw std::invalid_argument("gmm_infer: expected exactly one missing part, got " +
                                std::to_string(missing_count));

  std::vector<double> x(query.size());
  for (std::size_t j = 0; j < query.size(); ++j)
    if (query[j]) x[j] = static_cast<double>(*query[j]);

  GmmInference out;
  out.missing_part = missing;
  out.log_scores.resize(codebook_size);
  double best = kNegInf;
  for (std::size_t k = 0; k < codebook_size; ++k) {
    x[missing] = static_cast<double>(k);
    out.log_scores[k] = gmm_log_density(model, x);
    if (k == 0 || out.log_scores[k] > best + 1e-12) {  // log scale: relative tie tolerance
      best = out.log_scores[k];
      out.codeword = k;
    }
  }
  return out;
}

PartDescriptor gmm_recommend(const GmmModel& model, const Codebook& codebook,
                             const HolisticDescriptor& query, std::size_t* codeword) {
  const std::size_t hidden = query.sole_hidden_part();
  std::vector<std::optional<std::size_t>> words(query.part_count());
  for (std::size_t j = 0; j < query.part_count(); ++j)
    if (j != hidden) words[j] = quantize(query.parts[j].values, codebook);
  const GmmInference inf = gmm_infer(model, words, codebook.size());
  if (codeword) *codeword = inf.codeword;
  return PartDescriptor(codebook.centroids[inf.codeword]);
}

}  // namespace outfit
