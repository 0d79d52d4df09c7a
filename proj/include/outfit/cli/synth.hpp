#pragma once

#include <cstdint>
#include <filesystem>

#include <json.hpp>

namespace outfit::cli {

struct SynthOptions {
  std::filesystem::path out;
  std::size_t count = 600;
  std::uint64_t seed = 0;
  double patterned_fraction = 0.5;
  std::size_t rated_queries = 100;
  std::size_t raters = 5;
};

/// Writes a toy corpus: PNG images with a top and a bottom garment whose
/// colours follow a fixed pairing, `manifest.jsonl`, and a `ratings.csv` for
/// the five base algorithms. Every record passes the cleanup filter.
nlohmann::json synthesize_corpus(const SynthOptions& options);

}  // namespace outfit::cli
