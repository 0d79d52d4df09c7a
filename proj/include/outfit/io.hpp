#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>

namespace outfit {

// A prerequisite file (codebook, model, descriptor cache...) does not exist.
class MissingArtifact : public std::runtime_error {
 public:
  explicit MissingArtifact(const std::filesystem::path& p)
      : std::runtime_error("missing artifact: " + p.string()), path_(p) {}
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

// Input exists but its content is unusable.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Writes `contents` to a sibling temp file and renames it over `path`, so a
/// reader never observes a partially written artifact.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

std::string read_file(const std::filesystem::path& path);

// Throws MissingArtifact when `path` does not exist.
void require_exists(const std::filesystem::path& path);

/// FNV-1a over the bytes, rendered as 16 hex digits.
std::string fingerprint(std::string_view bytes);

}  // namespace outfit
