#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "outfit/cli/config.hpp"
#include "outfit/recommenders/model.hpp"

namespace outfit::cli {

// Each stage reads its prerequisites from the work directory, writes its
// artifacts atomically and returns a run summary. Missing prerequisites throw
// MissingArtifact; unusable inputs throw DataError or std::invalid_argument.

nlohmann::json run_ingest(const PipelineConfig& c);
nlohmann::json run_featurize(const PipelineConfig& c);

enum class CodebookSource { Descriptors, Patches };
nlohmann::json run_codebook(const PipelineConfig& c, CodebookSource source);

nlohmann::json run_train(const PipelineConfig& c, const std::vector<ModelKind>& kinds);

/// Recommends for every test image, or only `image` when given.
nlohmann::json run_recommend(const PipelineConfig& c, const std::vector<ModelKind>& kinds,
                             const std::optional<std::string>& image);

nlohmann::json run_retrieve(const PipelineConfig& c, const std::vector<ModelKind>& kinds);
nlohmann::json run_evaluate(const PipelineConfig& c);
nlohmann::json run_report(const PipelineConfig& c);

/// "all" expands to every model kind.
std::vector<ModelKind> parse_model_list(const std::string& name);

/// Fits one model from the config hyperparameters. GMM and MCL quantise the
/// training set with `codebook`.
TrainedModel train_model(ModelKind kind, const PipelineConfig& c, const std::vector<std::string>& train_ids,
                         const std::vector<HolisticDescriptor>& train, const Codebook* codebook,
                         const std::string& codebook_ref, std::vector<std::string>& warnings);

}  // namespace outfit::cli
