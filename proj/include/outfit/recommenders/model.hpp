#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "outfit/codebook.hpp"
#include "outfit/metric.hpp"
#include "outfit/recommenders/cnnc.hpp"
#include "outfit/recommenders/gmm.hpp"
#include "outfit/recommenders/mcl.hpp"
#include "outfit/recommenders/pr.hpp"
#include "outfit/recommenders/tar.hpp"

namespace outfit {

enum class ModelKind { PR, CNNC, GMM, MCL, TAR, Hybrid };

ModelKind parse_model_kind(const std::string& name);  // "pr", "cnnc", ...
std::string to_string(ModelKind k);
inline constexpr ModelKind kAllModelKinds[] = {ModelKind::PR,  ModelKind::CNNC, ModelKind::GMM,
                                               ModelKind::MCL, ModelKind::TAR,  ModelKind::Hybrid};

struct PrRecommender {
  PrMode mode = PrMode::Complementary;
};

/// Nonparametric: keeps the training images themselves.
struct CnncRecommender {
  std::size_t neighbors = 5;
  Metric metric = Metric::L1;
  std::size_t diverse = 0;  // 0 = single consensus descriptor
  std::uint64_t seed = 0;
  std::vector<std::string> train_ids;
  std::vector<HolisticDescriptor> train;
};

struct GmmRecommender {
  GmmModel gmm;
};

struct MclRecommender {
  MclModel mcl;
  MclCompletion completion = MclCompletion::Mode;
  std::uint64_t seed = 0;
};

struct TarRecommender {
  TarMode mode = TarMode::Uniform;
  std::uint64_t seed = 0;
};

struct HybridRecommender {
  double threshold = kDefaultSolidThreshold;
  CnncRecommender cnnc;
  TarRecommender tar;
};

using ModelParameters = std::variant<PrRecommender, CnncRecommender, GmmRecommender,
                                     MclRecommender, TarRecommender, HybridRecommender>;

struct TrainedModel {
  ModelParameters parameters;
  std::string codebook_ref;  // path of the codebook the model was trained with, if any

  ModelKind kind() const;
  bool needs_codebook() const;
};

struct Recommendation {
  std::vector<PartDescriptor> descriptors;
  std::optional<std::size_t> codeword;      // GMM / MCL
  std::optional<PatternClass> route;        // Hybrid
  std::vector<std::string> warnings;
};

/// Predicts the query's single hidden part. `codebook` is required for GMM
/// and MCL; `seed` perturbs TAR draws per query so queries differ.
Recommendation recommend(const TrainedModel& model, const HolisticDescriptor& query,
                         const Codebook* codebook, std::uint64_t query_seed);

/// Hybrid routing: CNNC consensus for solid queries, TAR for patterned ones.
Recommendation hybrid_recommend(const HybridRecommender& model, const HolisticDescriptor& query,
                                std::uint64_t query_seed);

Recommendation cnnc_recommend(const CnncRecommender& model, const HolisticDescriptor& query);
PartDescriptor tar_recommend(const TarRecommender& model, std::size_t dims, std::uint64_t query_seed);

nlohmann::json model_to_json(const TrainedModel& m);
TrainedModel model_from_json(const nlohmann::json& j);

}  // namespace outfit
