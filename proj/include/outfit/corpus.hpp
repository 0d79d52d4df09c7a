#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace outfit {

struct Box {
  int x = 0;
  int y = 0;
  int w = 0;
  int h = 0;
  friend bool operator==(const Box&, const Box&) = default;
};

struct PartAnnotation {
  std::string part_name;
  Box box;
  friend bool operator==(const PartAnnotation&, const PartAnnotation&) = default;
};

struct ImageRecord {
  std::string id;
  std::string image_path;
  int width = 0;
  int height = 0;
  std::vector<PartAnnotation> parts;
  std::vector<std::string> tags;
  std::optional<std::string> user_id;
  std::optional<std::string> brand;

  const PartAnnotation* find_part(const std::string& name) const;
  friend bool operator==(const ImageRecord&, const ImageRecord&) = default;
};

/// Names of the clothing parts, in chain order. The last entry is the part
/// hidden by default.
struct PartSchema {
  std::vector<std::string> names{"top", "bottom"};

  std::size_t size() const { return names.size(); }
  // Position of `name`, throws std::invalid_argument if unknown.
  std::size_t index_of(const std::string& name) const;
  bool contains(const std::string& name) const;
};

struct IngestError {
  std::size_t line = 0;  // 1-based
  std::string message;
};

struct IngestResult {
  std::vector<ImageRecord> records;
  std::vector<IngestError> errors;
};

// Parses and validates one manifest object. Throws std::invalid_argument with
// a human-readable reason.
ImageRecord record_from_json(const nlohmann::json& j, const PartSchema& schema);
nlohmann::json record_to_json(const ImageRecord& r);

/// Reads a JSON-lines manifest. Blank lines are ignored; malformed lines are
/// skipped and reported. Throws std::runtime_error if the file can't be opened.
IngestResult ingest(const std::filesystem::path& manifest, const PartSchema& schema = {});
IngestResult ingest_text(const std::string& text, const PartSchema& schema = {});

/// Keeps records with height >= 400 and height/width > 1.
std::vector<ImageRecord> cleanup(const std::vector<ImageRecord>& records);
bool passes_cleanup(const ImageRecord& r);

struct SplitSpec {
  std::size_t n_train = 0;
  std::size_t n_test = 0;
  std::uint64_t seed = 0;
};

struct Split {
  std::vector<ImageRecord> train;
  std::vector<ImageRecord> test;
};

/// Seeded shuffle, then the first n_train records train and the next n_test
/// test. Throws std::invalid_argument when n_train + n_test exceeds the corpus.
Split split(const std::vector<ImageRecord>& records, const SplitSpec& spec);

/// Records that annotate every part in the schema.
std::vector<ImageRecord> complete_records(const std::vector<ImageRecord>& records,
                                          const PartSchema& schema,
                                          std::vector<std::string>* excluded_ids = nullptr);

}  // namespace outfit
