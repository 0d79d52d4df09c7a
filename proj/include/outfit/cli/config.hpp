#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "outfit/corpus.hpp"

namespace outfit::cli {

// Invalid configuration or flag value; maps to the usage exit code.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct PipelineConfig {
  // [paths]
  std::filesystem::path manifest;
  std::filesystem::path workdir = "work";
  std::filesystem::path ratings;
  std::filesystem::path inventory;  // descriptor cache; defaults to the workdir cache
  std::filesystem::path output;     // gallery; defaults to <workdir>/report.html

  // [parts]
  PartSchema schema;
  std::string hidden;  // defaults to the last schema entry

  // [split]
  std::optional<std::size_t> n_train;
  std::optional<std::size_t> n_test;
  std::uint64_t split_seed = 0;

  // [features]
  std::string feature = "hsv";
  std::size_t codebook_size = 16;
  std::size_t patch_codebook_size = 32;
  std::size_t patches = 200;
  std::uint64_t feature_seed = 0;

  // [models]
  std::size_t neighbors = 5;
  std::size_t diverse = 0;
  std::string cnnc_metric = "l1";
  std::size_t gmm_components = 8;
  std::size_t mcl_topics = 4;
  double mcl_alpha = 1.0;
  double mcl_eta = 0.01;
  std::size_t mcl_iterations = 100;
  std::string mcl_completion = "mode";
  std::string tar_mode = "uniform";
  std::string pr_mode = "complementary";
  double solid_threshold = 0.5;
  std::uint64_t model_seed = 0;

  // [retrieval]
  std::string metric = "l1";
  std::size_t topk = 10;

  // [report]
  std::uint64_t report_seed = 0;

  std::string hidden_part() const { return hidden.empty() ? schema.names.back() : hidden; }
  std::filesystem::path inventory_path() const;
  std::filesystem::path output_path() const;

  /// Range checks; throws ConfigError.
  void validate() const;
};

/// Reads `key = value` lines grouped under `[section]` headers. Unknown keys
/// are rejected.
PipelineConfig load_config(const std::filesystem::path& path, PipelineConfig base = {});
PipelineConfig parse_config(const std::string& text, PipelineConfig base = {});

/// Well-known artifact locations under the work directory.
struct Workdir {
  std::filesystem::path root;

  std::filesystem::path records() const { return root / "records.jsonl"; }
  std::filesystem::path split() const { return root / "split.json"; }
  std::filesystem::path descriptors() const { return root / "descriptors.jsonl"; }
  std::filesystem::path codebook() const { return root / "codebook.json"; }
  std::filesystem::path patch_codebook() const { return root / "patch_codebook.json"; }
  std::filesystem::path model(const std::string& kind) const { return root / "models" / (kind + ".json"); }
  std::filesystem::path recommendations(const std::string& kind) const {
    return root / "recommendations" / (kind + ".jsonl");
  }
  std::filesystem::path retrievals(const std::string& kind) const { return root / "retrievals" / (kind + ".jsonl"); }
  std::filesystem::path scores() const { return root / "scores.json"; }
  std::filesystem::path evaluation_report() const { return root / "evaluation.html"; }
};

}  // namespace outfit::cli
