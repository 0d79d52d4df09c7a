#include "outfit/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>

namespace outfit {

using nlohmann::json;

const PartAnnotation* ImageRecord::find_part(const std::string& name) const {
  for (const auto& p : parts)
    if (p.part_name == name) return &p;
  return nullptr;
}

std::size_t PartSchema::index_of(const std::string& name) const {
  const auto it = std::find(names.begin(), names.end(), name);
  if (it == names.end()) throw std::invalid_argument("unknown part: " + name);
  return static_cast<std::size_t>(it - names.begin());
}

bool PartSchema::contains(const std::string& name) const {
  return std::find(names.begin(), names.end(), name) != names.end();
}

namespace {

const json& require_key(const json& j, const char* key) {
  const auto it = j.find(key);
  if (it == j.end()) throw std::invalid_argument(std::string("missing field '") + key + "'");
  return *it;
}

int require_int(const json& j, const char* key) {
  const json& v = require_key(j, key);
  if (!v.is_number_integer()) throw std::invalid_argument(std::string("field '") + key + "' must be an integer");
  return v.get<int>();
}

std::string require_string(const json& j, const char* key) {
  const json& v = require_key(j, key);
  if (!v.is_string()) throw std::invalid_argument(std::string("field '") + key + "' must be a string");
  return v.get<std::string>();
}

std::optional<std::string> optional_string(const json& j, const char* key) {
  const auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  if (!it->is_string()) throw std::invalid_argument(std::string("field '") + key + "' must be a string");
  return it->get<std::string>();
}

}  // namespace

ImageRecord record_from_json(const json& j, const PartSchema& schema) {
  if (!j.is_object()) throw std::invalid_argument("record is not a JSON object");
  ImageRecord r;
  r.id = require_string(j, "id");
  if (r.id.empty()) throw std::invalid_argument("empty id");
  r.image_path = require_string(j, "image_path");
  r.width = require_int(j, "width");
  r.height = require_int(j, "height");
  if (r.width <= 0 || r.height <= 0) throw std::invalid_argument("width and height must be positive");

  const json& parts = require_key(j, "parts");
  if (!parts.is_array()) throw std::invalid_argument("field 'parts' must be an array");
  std::set<std::string> seen;
  for (const json& pj : parts) {
    PartAnnotation p;
    p.part_name = require_string(pj, "part_name");
    if (!schema.contains(p.part_name)) throw std::invalid_argument("part '" + p.part_name + "' not in schema");
    if (!seen.insert(p.part_name).second) throw std::invalid_argument("duplicate part '" + p.part_name + "'");
    const json& box = require_key(pj, "box");
    if (!box.is_array() || box.size() != 4 ||
        !std::all_of(box.begin(), box.end(), [](const json& v) { return v.is_number_integer(); }))
      throw std::invalid_argument("box of '" + p.part_name + "' must be [x,y,w,h] integers");
    p.box = {box[0].get<int>(), box[1].get<int>(), box[2].get<int>(), box[3].get<int>()};
    if (p.box.w <= 0 || p.box.h <= 0) throw std::invalid_argument("box of '" + p.part_name + "' is empty");
    if (p.box.x < 0 || p.box.y < 0 || p.box.x + p.box.w > r.width || p.box.y + p.box.h > r.height)
      throw std::invalid_argument("box of '" + p.part_name + "' exceeds image bounds");
    r.parts.push_back(std::move(p));
  }

  if (const auto it = j.find("tags"); it != j.end() && !it->is_null()) {
    if (!it->is_array()) throw std::invalid_argument("field 'tags' must be an array");
    for (const json& t : *it) {
      if (!t.is_string()) throw std::invalid_argument("tags must be strings");
      r.tags.push_back(t.get<std::string>());
    }
  }
  r.user_id = optional_string(j, "user_id");
  r.brand = optional_string(j, "brand");
  return r;
}

json record_to_json(const ImageRecord& r) {
  json parts = json::array();
  for (const auto& p : r.parts)
    parts.push_back({{"part_name", p.part_name}, {"box", {p.box.x, p.box.y, p.box.w, p.box.h}}});
  json j = {{"id", r.id},         {"image_path", r.image_path}, {"width", r.width},
            {"height", r.height}, {"parts", parts},             {"tags", r.tags}};
  j["user_id"] = r.user_id ? json(*r.user_id) : json(nullptr);
  j["brand"] = r.brand ? json(*r.brand) : json(nullptr);
  return j;
}

IngestResult ingest_text(const std::string& text, const PartSchema& schema) {
  IngestResult out;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  std::set<std::string> ids;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      ImageRecord r = record_from_json(json::parse(line), schema);
      if (!ids.insert(r.id).second) throw std::invalid_argument("duplicate id '" + r.id + "'");
      out.records.push_back(std::move(r));
    } catch (const json::exception& e) {
      out.errors.push_back({lineno, std::string("malformed JSON: ") + e.what()});
    } catch (const std::invalid_argument& e) {
      out.errors.push_back({lineno, e.what()});
    }
  }
  return out;
}

IngestResult ingest(const std::filesystem::path& manifest, const PartSchema& schema) {
  std::ifstream in(manifest, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read manifest: " + manifest.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ingest_text(ss.str(), schema);
}

bool passes_cleanup(const ImageRecord& r) {
  // Integer form of H/W > 1.
  return r.height >= 400 && r.height > r.width;
}

std::vector<ImageRecord> cleanup(const std::vector<ImageRecord>& records) {
  std::vector<ImageRecord> out;
  std::copy_if(records.begin(), records.end(), std::back_inserter(out), passes_cleanup);
  return out;
}

Split split(const std::vector<ImageRecord>& records, const SplitSpec& spec) {
  if (spec.n_train + spec.n_test > records.size())
    throw std::invalid_argument("split of " + std::to_string(spec.n_train) + "+" +
                                std::to_string(spec.n_test) + " exceeds corpus of " +
                                std::to_string(records.size()));
  std::vector<std::size_t> order(records.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::mt19937_64 rng(spec.seed);
  std::shuffle(order.begin(), order.end(), rng);

  Split s;
  s.train.reserve(spec.n_train);
  s.test.reserve(spec.n_test);
  for (std::size_t i = 0; i < spec.n_train; ++i) s.train.push_back(records[order[i]]);
  for (std::size_t i = 0; i < spec.n_test; ++i) s.test.push_back(records[order[spec.n_train + i]]);
  return s;
}

std::vector<ImageRecord> complete_records(const std::vector<ImageRecord>& records,
                                          const PartSchema& schema,
                                          std::vector<std::string>* excluded_ids) {
  std::vector<ImageRecord> out;
  for (const auto& r : records) {
    const bool complete = std::all_of(schema.names.begin(), schema.names.end(),
                                      [&](const std::string& n) { return r.find_part(n) != nullptr; });
    if (complete)
      out.push_back(r);
    else if (excluded_ids)
      excluded_ids->push_back(r.id);
  }
  return out;
}

}  // namespace outfit
