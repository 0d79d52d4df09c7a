#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "outfit/codebook.hpp"
#include "outfit/descriptor.hpp"

namespace outfit {

/// Topic model whose words are chains of part codewords. Each image is one
/// document holding one chained word w_1..w_P; topic z selects a set of
/// part-to-part transition matrices while p(w_1) is shared by all topics.
struct MclModel {
  std::size_t codewords = 0;  // K
  std::size_t parts = 0;      // P
  double alpha = 1.0;         // topic pseudo-count
  double eta = 0.01;          // transition / initial pseudo-count
  std::vector<double> topic_weights;  // T
  std::vector<double> initial;        // K
  // transitions[z][j] is the K x K row-major matrix for part j -> j+1.
  std::vector<std::vector<std::vector<double>>> transitions;

  std::size_t topics() const { return topic_weights.size(); }
  double transition(std::size_t z, std::size_t j, std::size_t from, std::size_t to) const {
    return transitions[z][j][from * codewords + to];
  }
};

struct MclOptions {
  double alpha = 1.0;
  double eta = 0.01;
  std::size_t max_iterations = 100;
  double relative_tolerance = 1e-6;
};

struct MclTraining {
  MclModel model;
  std::vector<double> log_likelihood;
  std::size_t iterations = 0;
};

/// EM over the mixture of chains. Responsibilities start from seeded random
/// values; every re-estimated row carries `eta` pseudo-counts. Throws when
/// T < 1, P < 2, eta <= 0 or a codeword is outside [0, K).
MclTraining mcl_train(const std::vector<std::vector<std::size_t>>& words, std::size_t codewords,
                      std::size_t topics, std::uint64_t seed, const MclOptions& options = {});

/// p(w | z) for a complete chain.
double mcl_chain_probability(const MclModel& model, std::size_t topic,
                             const std::vector<std::size_t>& words);

/// p(z | visible words) with the missing parts summed out.
std::vector<double> mcl_topic_posterior(const MclModel& model,
                                        const std::vector<std::optional<std::size_t>>& query);

enum class MclCompletion { Mode, Sample };

struct MclInference {
  std::size_t missing_part = 0;
  std::size_t topic = 0;
  std::size_t codeword = 0;
  std::vector<double> topic_posterior;
  std::vector<double> conditional;  // p(w_m = k | visible, topic), k in [0, K)
};

/// Picks the most probable topic for the visible words, then completes the
/// single missing part from that topic's chain: the modal codeword (lowest on
/// ties, with scores within a relative 1e-12 counted as tied) or, in Sample
/// mode, a draw seeded by `seed`.
MclInference mcl_infer(const MclModel& model, const std::vector<std::optional<std::size_t>>& query,
                       MclCompletion completion = MclCompletion::Mode, std::uint64_t seed = 0);

PartDescriptor mcl_recommend(const MclModel& model, const Codebook& codebook,
                             const HolisticDescriptor& query,
                             MclCompletion completion = MclCompletion::Mode,
                             std::uint64_t seed = 0, std::size_t* codeword = nullptr);

}  // namespace outfit
