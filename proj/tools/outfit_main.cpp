#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "outfit/cli/config.hpp"
#include "outfit/cli/pipeline.hpp"
#include "outfit/cli/synth.hpp"
#include "outfit/io.hpp"

namespace {

using namespace outfit;
using namespace outfit::cli;

enum Exit { kOk = 0, kUsage = 1, kMissing = 2, kData = 3 };

template <class T>
void override_with(T& target, const std::optional<T>& flag) {
  if (flag) target = *flag;
}

int finish(const std::string& command, Exit code, nlohmann::json summary, const std::string& error = {}) {
  summary["command"] = command;
  summary["status"] = code == kOk ? "ok" : "error";
  summary["exit_code"] = static_cast<int>(code);
  if (!error.empty()) {
    summary["error"] = error;
    std::cerr << "outfit " << command << ": " << error << '\n';
  }
  std::cout << summary.dump() << std::endl;
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Complementary clothing recommendation pipeline"};
  app.fallthrough();
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::string> workdir, manifest, ratings, inventory, output, hidden, feature, metric;
  std::optional<std::string> tar_mode, pr_mode, mcl_completion, cnnc_metric;
  std::optional<std::size_t> n_train, n_test, codebook_size, patches, neighbors, diverse, gmm_components,
      mcl_topics, topk;
  std::optional<std::uint64_t> seed;
  std::optional<double> solid_threshold;

  app.add_option("-c,--config", config_path, "configuration file")->envname("OUTFIT_CONFIG");
  app.add_option("--workdir", workdir, "directory holding pipeline artifacts")->envname("OUTFIT_WORKDIR");
  app.add_option("--hidden", hidden, "part to recommend")->envname("OUTFIT_HIDDEN");

  auto* ingest = app.add_subcommand("ingest", "parse, clean and split the manifest");
  ingest->add_option("--manifest", manifest, "JSON-lines manifest")->envname("OUTFIT_MANIFEST");
  ingest->add_option("--n-train", n_train);
  ingest->add_option("--n-test", n_test);
  ingest->add_option("--seed", seed, "split seed");

  auto* featurize = app.add_subcommand("featurize", "compute part descriptors");
  featurize->add_option("--feature", feature)->check(CLI::IsMember({"hsv", "bow"}));
  featurize->add_option("--patches", patches);
  featurize->add_option("--seed", seed, "patch sampling seed");

  std::string source = "descriptors";
  auto* codebook = app.add_subcommand("codebook", "cluster descriptors or patches into a codebook");
  codebook->add_option("--source", source)->check(CLI::IsMember({"descriptors", "patches"}));
  codebook->add_option("-K,--size", codebook_size);
  codebook->add_option("--seed", seed);

  std::string model_name = "all";
  const auto model_names = CLI::IsMember({"pr", "cnnc", "gmm", "mcl", "tar", "hybrid", "all"});
  auto* train = app.add_subcommand("train", "fit recommendation models");
  train->add_option("--model", model_name)->check(model_names);
  train->add_option("--neighbors", neighbors);
  train->add_option("--diverse", diverse);
  train->add_option("--cnnc-metric", cnnc_metric)->check(CLI::IsMember({"l1", "l2", "kl"}));
  train->add_option("--components", gmm_components);
  train->add_option("--topics", mcl_topics);
  train->add_option("--completion", mcl_completion)->check(CLI::IsMember({"mode", "sample"}));
  train->add_option("--tar-mode", tar_mode)->check(CLI::IsMember({"uniform", "peaked"}));
  train->add_option("--pr-mode", pr_mode)->check(CLI::IsMember({"complementary", "triad"}));
  train->add_option("--threshold", solid_threshold);
  train->add_option("--seed", seed);

  std::optional<std::string> image;
  auto* recommend = app.add_subcommand("recommend", "predict hidden-part descriptors");
  recommend->add_option("--model", model_name)->check(model_names);
  recommend->add_option("--image", image, "single image id; defaults to the test split");
  recommend->add_option("--seed", seed);

  auto* retrieve = app.add_subcommand("retrieve", "rank inventory items for each recommendation");
  retrieve->add_option("--model", model_name)->check(model_names);
  retrieve->add_option("--topk", topk);
  retrieve->add_option("--metric", metric)->check(CLI::IsMember({"l1", "l2", "kl"}));
  retrieve->add_option("--inventory", inventory, "descriptor cache to search")->envname("OUTFIT_INVENTORY");

  auto* evaluate = app.add_subcommand("evaluate", "aggregate crowd ratings");
  evaluate->add_option("--ratings", ratings, "ratings CSV")->envname("OUTFIT_RATINGS");
  evaluate->add_option("--inventory", inventory)->envname("OUTFIT_INVENTORY");

  auto* report = app.add_subcommand("report", "render the HTML gallery");
  report->add_option("--output", output)->envname("OUTFIT_OUTPUT");
  report->add_option("--seed", seed, "row order seed");

  SynthOptions synth_opts;
  auto* synth = app.add_subcommand("synth", "generate a toy corpus");
  synth->add_option("--out", synth_opts.out)->required();
  synth->add_option("--count", synth_opts.count);
  synth->add_option("--seed", synth_opts.seed);
  synth->add_option("--rated-queries", synth_opts.rated_queries);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    if (synth->parsed()) return finish(command, kOk, synthesize_corpus(synth_opts));

    PipelineConfig c;
    if (!config_path.empty()) c = load_config(config_path);
    if (workdir) c.workdir = *workdir;
    if (manifest) c.manifest = *manifest;
    if (ratings) c.ratings = *ratings;
    if (inventory) c.inventory = *inventory;
    if (output) c.output = *output;
    override_with(c.hidden, hidden);
    override_with(c.feature, feature);
    override_with(c.metric, metric);
    override_with(c.tar_mode, tar_mode);
    override_with(c.pr_mode, pr_mode);
    override_with(c.mcl_completion, mcl_completion);
    override_with(c.cnnc_metric, cnnc_metric);
    override_with(c.patches, patches);
    override_with(c.neighbors, neighbors);
    override_with(c.diverse, diverse);
    override_with(c.gmm_components, gmm_components);
    override_with(c.mcl_topics, mcl_topics);
    override_with(c.topk, topk);
    override_with(c.solid_threshold, solid_threshold);
    if (n_train) c.n_train = n_train;
    if (n_test) c.n_test = n_test;
    if (seed) {
      if (ingest->parsed()) c.split_seed = *seed;
      if (featurize->parsed() || codebook->parsed()) c.feature_seed = *seed;
      if (train->parsed() || recommend->parsed()) c.model_seed = *seed;
      if (report->parsed()) c.report_seed = *seed;
    }
    if (codebook_size) {
      if (source == "patches") c.patch_codebook_size = *codebook_size;
      else c.codebook_size = *codebook_size;
    }
    c.validate();

    nlohmann::json summary;
    if (ingest->parsed()) summary = run_ingest(c);
    else if (featurize->parsed()) summary = run_featurize(c);
    else if (codebook->parsed())
      summary = run_codebook(c, source == "patches" ? CodebookSource::Patches : CodebookSource::Descriptors);
    else if (train->parsed()) summary = run_train(c, parse_model_list(model_name));
    else if (recommend->parsed()) summary = run_recommend(c, parse_model_list(model_name), image);
    else if (retrieve->parsed()) summary = run_retrieve(c, parse_model_list(model_name));
    else if (evaluate->parsed()) summary = run_evaluate(c);
    else summary = run_report(c);
    return finish(command, kOk, std::move(summary));
  } catch (const ConfigError& e) {
    std::cerr << app.get_subcommands().front()->help();
    return finish(command, kUsage, {}, e.what());
  } catch (const MissingArtifact& e) {
    return finish(command, kMissing, {{"missing", e.path().string()}}, e.what());
  } catch (const DataError& e) {
    return finish(command, kData, {}, e.what());
  } catch (const std::invalid_argument& e) {
    return finish(command, kData, {}, e.what());
  } catch (const std::exception& e) {
    return finish(command, kData, {}, e.what());
  }
}
