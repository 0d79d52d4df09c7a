#include "outfit/recommenders/mcl.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

namespace outfit {

namespace {

// Scores within a relative 1e-12 are ties and keep the lower index.
bool clearly_above(double a, double b) { return a > b + 1e-12 * std::fabs(b); }

double log_sum_exp(const std::vector<double>& terms) {
  double mx = -std::numeric_limits<double>::infinity();
  for (double t : terms) mx = std::max(mx, t);
  if (!std::isfinite(mx)) return mx;
  double s = 0.0;
  for (double t : terms) s += std::exp(t - mx);
  return mx + std::log(s);
}

double chain_log_probability(const MclModel& m, std::size_t z, const std::vector<std::size_t>& w) {
  double lp = std::log(m.initial[w[0]]);
  for (std::size_t j = 0; j + 1 < w.size(); ++j) lp += std::log(m.transition(z, j, w[j], w[j + 1]));
  return lp;
}

std::size_t single_missing(const MclModel& m, const std::vector<std::optional<std::size_t>>& q) {
  if (q.size() != m.parts)
    throw std::invalid_argument("mcl: query has " + std::to_string(q.size()) + " parts, model has " +
                                std::to_string(m.parts));
  std::size_t missing = q.size(), count = 0;
  for (std::size_t j = 0; j < q.size(); ++j) {
    if (!q[j]) {
      missing = j;
      ++count;
    } else if (*q[j] >= m.codewords) {
      throw std::invalid_argument("mcl: codeword out of range");
    }
  }
  if (count == q.size()) throw std::invalid_argument("mcl: all parts hidden");
  if (count != 1) throw std::invalid_argument("mcl: expected exactly one missing part");
  return missing;
}

// Unnormalised p(w_m = k, visible | z) for one missing part m.
std::vector<double> completion_weights(const MclModel& m, std::size_t z,
                                       const std::vector<std::optional<std::size_t>>& q,
                                       std::size_t missing) {
  std::vector<double> out(m.codewords);
  std::vector<std::size_t> w(q.size());
  for (std::size_t j = 0; j < q.size(); ++j)
    if (q[j]) w[j] = *q[j];
  for (std::size_t k = 0; k < m.codewords; ++k) {
    w[missing] = k;
    out[k] = mcl_chain_probability(m, z, w);
  }
  return out;
}

}  // namespace

MclTraining mcl_train(const std::vector<std::vector<std::size_t>>& words, std::size_t codewords,
                      std::size_t topics, std::uint64_t seed, const MclOptions& options) {
  if (topics < 1) throw std::invalid_argument("mcl: topic count must be at least 1");
  if (codewords < 1) throw std::invalid_argument("mcl: codebook size must be positive");
  if (!(options.eta > 0.0)) throw std::invalid_argument("mcl: eta must be positive");
  if (!(options.alpha > 0.0)) throw std::invalid_argument("mcl: alpha must be positive");
  if (words.empty()) throw std::invalid_argument("mcl: empty training data");
  const std::size_t parts = words.front().size();
  if (parts < 2) throw std::invalid_argument("mcl: need at least two parts");
  for (const auto& w : words) {
    if (w.size() != parts) throw std::invalid_argument("mcl: ragged training rows");
    for (std::size_t v : w)
      if (v >= codewords) throw std::invalid_argument("mcl: codeword out of range");
  }

  const std::size_t n = words.size();
  const std::size_t K = codewords;
  MclTraining out;
  MclModel& m = out.model;
  m.codewords = K;
  m.parts = parts;
  m.alpha = options.alpha;
  m.eta = options.eta;

  // p(w_1) is topic independent and fixed by the data.
  m.initial.assign(K, options.eta);
  for (const auto& w : words) m.initial[w[0]] += 1.0;
  for (double& v : m.initial) v /= static_cast<double>(n) + K * options.eta;

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.5, 1.5);
  std::vector<std::vector<double>> resp(n, std::vector<double>(topics));
  for (auto& r : resp) {
    double s = 0.0;
    for (double& v : r) s += (v = unit(rng));
    for (double& v : r) v /= s;
  }

  m.topic_weights.assign(topics, 0.0);
  m.transitions.assign(topics, std::vector<std::vector<double>>(parts - 1, std::vector<double>(K * K)));

  auto m_step = [&] {
    for (std::size_t z = 0; z < topics; ++z) {
      double nz = 0.0;
      for (std::size_t i = 0; i < n; ++i) nz += resp[i][z];
      m.topic_weights[z] = (nz + options.alpha) / (static_cast<double>(n) + topics * options.alpha);
      for (std::size_t j = 0; j + 1 < parts; ++j) {
        auto& mat = m.transitions[z][j];
        std::fill(mat.begin(), mat.end(), options.eta);
        std::vector<double> row_mass(K, K * options.eta);
        for (std::size_t i = 0; i < n; ++i) {
          mat[words[i][j] * K + words[i][j + 1]] += resp[i][z];
          row_mass[words[i][j]] += resp[i][z];
        }
        for (std::size_t a = 0; a < K; ++a)
          for (std::size_t b = 0; b < K; ++b) mat[a * K + b] /= row_mass[a];
      }
    }
  };

  m_step();
  std::vector<double> terms(topics);
  for (std::size_t it = 0; it < options.max_iterations; ++it) {
    double ll = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t z = 0; z < topics; ++z)
        terms[z] = std::log(m.topic_weights[z]) + chain_log_probability(m, z, words[i]);
      const double lse = log_sum_exp(terms);
      ll += lse;
      for (std::size_t z = 0; z < topics; ++z) resp[i][z] = std::exp(terms[z] - lse);
    }
    out.iterations = it + 1;
    const bool done = !out.log_likelihood.empty() &&
                      std::abs(ll - out.log_likelihood.back()) <=
                          options.relative_tolerance * std::abs(out.log_likelihood.back());
    out.log_likelihood.push_back(ll);
    m_step();
    if (done || topics == 1) break;
  }
  return out;
}

double mcl_chain_probability(const MclModel& model, std::size_t topic,
                             const std::vector<std::size_t>& words) {
  if (words.size() != model.parts) throw std::invalid_argument("mcl: chain length mismatch");
  double p = model.initial[words[0]];
  for (std::size_t j = 0; j + 1 < words.size(); ++j) p *= model.transition(topic, j, words[j], words[j + 1]);
  return p;
}

std::vector<double> mcl_topic_posterior(const MclModel& model,
                                        const std::vector<std::optional<std::size_t>>& query) {
  const std::size_t missing = single_missing(model, query);
  std::vector<double> post(model.topics());
  double total = 0.0;
  for (std::size_t z = 0; z < model.topics(); ++z) {
    double marginal = 0.0;
    for (double w : completion_weights(model, z, query, missing)) marginal += w;
    post[z] = model.topic_weights[z] * marginal;
    total += post[z];
  }
  if (!(total > 0.0)) throw std::runtime_error("mcl: visible words have zero probability");
  for (double& p : post) p /= total;
  return post;
}

MclInference mcl_infer(const MclModel& model, const std::vector<std::optional<std::size_t>>& query,
                       MclCompletion completion, std::uint64_t seed) {
  MclInference out;
  out.missing_part = single_missing(model, query);
  out.topic_posterior = mcl_topic_posterior(model, query);
  for (std::size_t z = 1; z < out.topic_posterior.size(); ++z)
    if (clearly_above(out.topic_posterior[z], out.topic_posterior[out.topic])) out.topic = z;

  out.conditional = completion_weights(model, out.topic, query, out.missing_part);
  double total = 0.0;
  for (double w : out.conditional) total += w;
  for (double& w : out.conditional) w /= total;

  if (completion == MclCompletion::Mode) {
    for (std::size_t k = 1; k < out.conditional.size(); ++k)
      if (clearly_above(out.conditional[k], out.conditional[out.codeword])) out.codeword = k;
  } else {
    std::mt19937_64 rng(seed);
    std::discrete_distribution<std::size_t> draw(out.conditional.begin(), out.conditional.end());
    out.codeword = draw(rng);
  }
  return out;
}

PartDescriptor mcl_recommend(const MclModel& model, const Codebook& codebook,
                             const HolisticDescriptor& query, MclCompletion completion,
                             std::uint64_t seed, std::size_t* codeword) {
  if (codebook.size() != model.codewords)
    throw std::invalid_argument("mcl: codebook size does not match model");
  const std::size_t hidden = query.sole_hidden_part();
  std::vector<std::optional<std::size_t>> words(query.part_count());
  for (std::size_t j = 0; j < query.part_count(); ++j)
    if (j != hidden) words[j] = quantize(query.parts[j].values, codebook);
  const MclInference inf = mcl_infer(model, words, completion, seed);
  if (codeword) *codeword = inf.codeword;
  return PartDescriptor(codebook.centroids[inf.codeword]);
}

}  // namespace outfit
