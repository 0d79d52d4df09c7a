#include "outfit/cli/config.hpp"

#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "outfit/io.hpp"

namespace outfit::cli {

namespace pt = boost::property_tree;

std::filesystem::path PipelineConfig::inventory_path() const {
  return inventory.empty() ? Workdir{workdir}.descriptors() : inventory;
}

std::filesystem::path PipelineConfig::output_path() const {
  return output.empty() ? workdir / "report.html" : output;
}

void PipelineConfig::validate() const {
  auto fail = [](const std::string& m) { throw ConfigError(m); };
  if (schema.names.size() < 2) fail("parts.schema needs at least two parts");
  if (!schema.contains(hidden_part())) fail("parts.hidden '" + hidden_part() + "' is not in the schema");
  if (feature != "hsv" && feature != "bow") fail("features.feature must be hsv or bow");
  if (codebook_size < 2) fail("features.codebook_size must be at least 2");
  if (patch_codebook_size < 2) fail("features.patch_codebook_size must be at least 2");
  if (patches < 1) fail("features.patches must be positive");
  if (neighbors < 1) fail("models.neighbors must be positive");
  if (gmm_components < 1) fail("models.gmm_components must be positive");
  if (mcl_topics < 1) fail("models.mcl_topics must be positive");
  if (!(mcl_alpha > 0.0)) fail("models.mcl_alpha must be positive");
  if (!(mcl_eta > 0.0)) fail("models.mcl_eta must be positive");
  if (mcl_completion != "mode" && mcl_completion != "sample") fail("models.mcl_completion must be mode or sample");
  if (tar_mode != "uniform" && tar_mode != "peaked") fail("models.tar_mode must be uniform or peaked");
  if (pr_mode != "complementary" && pr_mode != "triad") fail("models.pr_mode must be complementary or triad");
  if (solid_threshold < 0.0 || solid_threshold > 1.0) fail("models.solid_threshold must lie in [0, 1]");
  for (const auto& m : {metric, cnnc_metric})
    if (m != "l1" && m != "l2" && m != "kl") fail("metric must be l1, l2 or kl");
  if (topk < 1) fail("retrieval.topk must be positive");
}

namespace {

template <class T>
T as(const std::string& key, const std::string& value) {
  std::istringstream in(value);
  T out{};
  in >> out;
  if (in.fail() || !(in >> std::ws).eof()) throw ConfigError("config key '" + key + "': bad value '" + value + "'");
  return out;
}

std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> out;
  std::istringstream in(v);
  std::string item;
  while (std::getline(in, item, ',')) {
    const auto b = item.find_first_not_of(" \t"), e = item.find_last_not_of(" \t");
    if (b != std::string::npos) out.push_back(item.substr(b, e - b + 1));
  }
  return out;
}

void apply(PipelineConfig& c, const std::string& key, const std::string& v) {
  if (key == "paths.manifest") c.manifest = v;
  else if (key == "paths.workdir") c.workdir = v;
  else if (key == "paths.ratings") c.ratings = v;
  else if (key == "paths.inventory") c.inventory = v;
  else if (key == "paths.output") c.output = v;
  else if (key == "parts.schema") c.schema.names = split_list(v);
  else if (key == "parts.hidden") c.hidden = v;
  else if (key == "split.n_train") c.n_train = as<std::size_t>(key, v);
  else if (key == "split.n_test") c.n_test = as<std::size_t>(key, v);
  else if (key == "split.seed") c.split_seed = as<std::uint64_t>(key, v);
  else if (key == "features.feature") c.feature = v;
  else if (key == "features.codebook_size") c.codebook_size = as<std::size_t>(key, v);
  else if (key == "features.patch_codebook_size") c.patch_codebook_size = as<std::size_t>(key, v);
  else if (key == "features.patches") c.patches = as<std::size_t>(key, v);
  else if (key == "features.seed") c.feature_seed = as<std::uint64_t>(key, v);
  else if (key == "models.neighbors") c.neighbors = as<std::size_t>(key, v);
  else if (key == "models.diverse") c.diverse = as<std::size_t>(key, v);
  else if (key == "models.cnnc_metric") c.cnnc_metric = v;
  else if (key == "models.gmm_components") c.gmm_components = as<std::size_t>(key, v);
  else if (key == "models.mcl_topics") c.mcl_topics = as<std::size_t>(key, v);
  else if (key == "models.mcl_alpha") c.mcl_alpha = as<double>(key, v);
  else if (key == "models.mcl_eta") c.mcl_eta = as<double>(key, v);
  else if (key == "models.mcl_iterations") c.mcl_iterations = as<std::size_t>(key, v);
  else if (key == "models.mcl_completion") c.mcl_completion = v;
  else if (key == "models.tar_mode") c.tar_mode = v;
  else if (key == "models.pr_mode") c.pr_mode = v;
  else if (key == "models.solid_threshold") c.solid_threshold = as<double>(key, v);
  else if (key == "models.seed") c.model_seed = as<std::uint64_t>(key, v);
  else if (key == "retrieval.metric") c.metric = v;
  else if (key == "retrieval.topk") c.topk = as<std::size_t>(key, v);
  else if (key == "report.seed") c.report_seed = as<std::uint64_t>(key, v);
  else throw ConfigError("unknown config key '" + key + "'");
}

}  // namespace

PipelineConfig parse_config(const std::string& text, PipelineConfig base) {
  pt::ptree tree;
  std::istringstream in(text);
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  for (const auto& [section, body] : tree) {
    if (body.empty()) throw ConfigError("config key '" + section + "' must sit inside a [section]");
    for (const auto& [key, value] : body) apply(base, section + "." + key, value.data());
  }
  return base;
}

PipelineConfig load_config(const std::filesystem::path& path, PipelineConfig base) {
  if (!std::filesystem::exists(path)) throw ConfigError("config file not found: " + path.string());
  return parse_config(read_file(path), std::move(base));
}

}  // namespace outfit::cli
