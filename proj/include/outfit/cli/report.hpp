#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "outfit/eval.hpp"

namespace outfit::cli {

inline constexpr std::size_t kGalleryColumns = 10;

/// Ranked inventory ids per algorithm for one query.
struct GalleryQuery {
  std::string query_id;
  std::map<std::string, std::vector<std::string>> ranked;
};

struct GalleryCell {
  std::string item_id;             // empty when the list is shorter than a row
  std::optional<std::string> src;  // image source; nullopt renders a placeholder
};

struct GalleryRow {
  std::string algorithm;
  std::vector<GalleryCell> cells;  // always kGalleryColumns
};

struct GalleryGrid {
  std::string query_id;
  std::optional<std::string> query_src;
  std::vector<GalleryRow> rows;
};

struct Gallery {
  std::uint64_t seed = 0;
  std::vector<GalleryGrid> grids;
  std::vector<std::string> warnings;
};

using ImageLookup = std::function<std::optional<std::string>(const std::string& id)>;

/// One grid per query with the algorithm rows shuffled by a generator seeded
/// from `seed` and the query id, so the order is reproducible per query.
Gallery build_gallery(const std::vector<GalleryQuery>& queries, std::uint64_t seed, const ImageLookup& image_for);

std::string render_gallery_html(const Gallery& g);

struct EvaluationSummary {
  AgreementStats overall;
  std::map<std::string, AgreementStats> per_class;
  std::optional<AgreementReport> agreement;
  std::optional<SolidProbability> solid;
};

std::string render_evaluation_html(const EvaluationSummary& s);

}  // namespace outfit::cli
