#include "outfit/cli/pipeline.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "outfit/cli/image_io.hpp"
#include "outfit/cli/report.hpp"
#include "outfit/corpus.hpp"
#include "outfit/eval.hpp"
#include "outfit/features.hpp"
#include "outfit/index.hpp"
#include "outfit/io.hpp"

namespace outfit::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct SplitInfo {
  fs::path image_root;
  std::vector<std::string> train;
  std::vector<std::string> test;
};

std::uint64_t id_seed(std::uint64_t seed, const std::string& id) {
  return seed ^ std::stoull(fingerprint(id), nullptr, 16);
}

json load_json(const fs::path& p) {
  require_exists(p);
  try {
    return json::parse(read_file(p));
  } catch (const json::exception& e) {
    throw DataError(p.string() + ": " + e.what());
  }
}

SplitInfo load_split(const Workdir& w) {
  const json j = load_json(w.split());
  return {j.at("image_root").get<std::string>(), j.at("train").get<std::vector<std::string>>(),
          j.at("test").get<std::vector<std::string>>()};
}

std::map<std::string, ImageRecord> load_records(const Workdir& w, const PartSchema& schema) {
  require_exists(w.records());
  const auto parsed = ingest_text(read_file(w.records()), schema);
  if (!parsed.errors.empty())
    throw DataError(w.records().string() + " line " + std::to_string(parsed.errors.front().line) + ": " +
                    parsed.errors.front().message);
  std::map<std::string, ImageRecord> out;
  for (const auto& r : parsed.records) out.emplace(r.id, r);
  return out;
}

DescriptorCache load_cache(const fs::path& p) {
  require_exists(p);
  return DescriptorCache::load(p);
}

// Every schema part of `id`, with `hidden` masked when given. nullopt when a
// needed part has no descriptor.
std::optional<HolisticDescriptor> holistic(const DescriptorCache& cache, const std::string& id,
                                           const PartSchema& schema, const std::string* hidden = nullptr) {
  HolisticDescriptor h;
  for (const auto& part : schema.names) {
    const bool visible = hidden == nullptr || part != *hidden;
    const auto* d = cache.find(id, part);
    if (visible && d == nullptr) return std::nullopt;
    h.parts.push_back(visible ? *d : PartDescriptor{});
    h.visible.push_back(visible);
  }
  return h;
}

fs::path resolve(const PipelineConfig& c, const std::string& ref) {
  const fs::path p(ref);
  return p.is_absolute() ? p : c.workdir / p;
}

json warnings_json(const std::vector<std::string>& w) { return w; }

std::vector<std::string> read_lines(const fs::path& p) {
  std::istringstream in(read_file(p));
  std::vector<std::string> out;
  for (std::string line; std::getline(in, line);)
    if (!line.empty()) out.push_back(line);
  return out;
}

}  // namespace

std::vector<ModelKind> parse_model_list(const std::string& name) {
  if (name == "all") return {std::begin(kAllModelKinds), std::end(kAllModelKinds)};
  try {
    return {parse_model_kind(name)};
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

json run_ingest(const PipelineConfig& c) {
  if (c.manifest.empty()) throw ConfigError("no manifest given");
  require_exists(c.manifest);
  const Workdir w{c.workdir};
  const IngestResult ingested = ingest(c.manifest, c.schema);
  const auto kept = cleanup(ingested.records);
  std::vector<std::string> incomplete;
  const auto complete = complete_records(kept, c.schema, &incomplete);

  SplitSpec spec{0, 0, c.split_seed};
  if (c.n_train) {
    spec.n_train = *c.n_train;
    spec.n_test = c.n_test.value_or(complete.size() - std::min(complete.size(), *c.n_train));
  } else if (c.n_test) {
    spec.n_test = *c.n_test;
    spec.n_train = complete.size() - std::min(complete.size(), *c.n_test);
  } else {
    spec.n_train = complete.size() * 4 / 5;
    spec.n_test = complete.size() - spec.n_train;
  }
  if (spec.n_train + spec.n_test > complete.size())
    throw DataError("split needs " + std::to_string(spec.n_train + spec.n_test) + " complete records, have " +
                    std::to_string(complete.size()));
  const Split s = split(complete, spec);

  std::string records;
  for (const auto& r : kept) records += record_to_json(r).dump() + "\n";
  write_file_atomic(w.records(), records);

  auto ids = [](const std::vector<ImageRecord>& rs) {
    std::vector<std::string> out;
    for (const auto& r : rs) out.push_back(r.id);
    return out;
  };
  const json split_json = {{"image_root", fs::absolute(c.manifest).parent_path().string()},
                           {"seed", c.split_seed},
                           {"train", ids(s.train)},
                           {"test", ids(s.test)},
                           {"incomplete", incomplete}};
  write_file_atomic(w.split(), split_json.dump(2) + "\n");

  json errors = json::array();
  for (const auto& e : ingested.errors) errors.push_back({{"line", e.line}, {"message", e.message}});
  return {{"parsed", ingested.records.size()},
          {"rejected_lines", errors},
          {"removed_by_cleanup", ingested.records.size() - kept.size()},
          {"incomplete", incomplete.size()},
          {"train", s.train.size()},
          {"test", s.test.size()},
          {"artifacts", {w.records().string(), w.split().string()}}};
}

json run_featurize(const PipelineConfig& c) {
  const Workdir w{c.workdir};
  const auto records = load_records(w, c.schema);
  const SplitInfo info = load_split(w);
  std::optional<Codebook> patch_codebook;
  if (c.feature == "bow") patch_codebook = codebook_from_json(load_json(w.patch_codebook()));

  DescriptorCache cache;
  cache.feature = c.feature;
  std::vector<std::string> warnings;
  std::size_t images = 0;
  for (const auto& [id, rec] : records) {
    HsvImage img;
    try {
      img = load_hsv_image(info.image_root / rec.image_path);
    } catch (const std::runtime_error& e) {
      warnings.push_back(e.what());
      continue;
    }
    ++images;
    for (const auto& part : rec.parts) {
      if (c.feature == "hsv") {
        const auto px = img.region(part.box);
        cache.put(id, part.part_name, hsv_histogram(px));
      } else {
        cache.put(id, part.part_name,
                  color_bow(img, part.box, *patch_codebook, c.patches, id_seed(c.feature_seed, id + "/" + part.part_name)));
      }
    }
  }
  write_file_atomic(w.descriptors(), cache.to_jsonl());
  return {{"feature", c.feature},
          {"images", images},
          {"descriptors", cache.size()},
          {"warnings", warnings_json(warnings)},
          {"artifacts", {w.descriptors().string()}}};
}

json run_codebook(const PipelineConfig& c, CodebookSource source) {
  const Workdir w{c.workdir};
  const SplitInfo info = load_split(w);
  std::vector<Vector> inputs;
  std::vector<std::string> warnings;
  fs::path target;
  std::size_t k = 0;

  if (source == CodebookSource::Descriptors) {
    const auto cache = load_cache(w.descriptors());
    for (const auto& id : info.train)
      for (const auto& part : c.schema.names)
        if (const auto* d = cache.find(id, part)) inputs.push_back(d->values);
    target = w.codebook();
    k = c.codebook_size;
  } else {
    const auto records = load_records(w, c.schema);
    for (const auto& id : info.train) {
      const auto it = records.find(id);
      if (it == records.end()) continue;
      HsvImage img;
      try {
        img = load_hsv_image(info.image_root / it->second.image_path);
      } catch (const std::runtime_error& e) {
        warnings.push_back(e.what());
        continue;
      }
      for (const auto& part : it->second.parts)
        for (auto& p : sample_patches(img, part.box, c.patches, id_seed(c.feature_seed, id + "/" + part.part_name)))
          inputs.push_back(std::move(p.values));
    }
    target = w.patch_codebook();
    k = c.patch_codebook_size;
  }
  if (inputs.empty()) throw DataError("no training inputs for the codebook");

  const auto trained = train_codebook(inputs, k, c.feature_seed);
  write_file_atomic(target, codebook_to_json(trained.codebook).dump() + "\n");
  return {{"source", source == CodebookSource::Descriptors ? "descriptors" : "patches"},
          {"K", k},
          {"inputs", inputs.size()},
          {"iterations", trained.iterations},
          {"inertia", trained.inertia_history.empty() ? 0.0 : trained.inertia_history.back()},
          {"warnings", warnings_json(warnings)},
          {"artifacts", {target.string()}}};
}

TrainedModel train_model(ModelKind kind, const PipelineConfig& c, const std::vector<std::string>& train_ids,
                         const std::vector<HolisticDescriptor>& train, const Codebook* codebook,
                         const std::string& codebook_ref, std::vector<std::string>& warnings) {
  auto cnnc = [&] {
    CnncRecommender m;
    m.neighbors = c.neighbors;
    m.metric = parse_metric(c.cnnc_metric);
    m.diverse = c.diverse;
    m.seed = c.model_seed;
    m.train_ids = train_ids;
    m.train = train;
    return m;
  };
  const TarRecommender tar{parse_tar_mode(c.tar_mode), c.model_seed};
  auto words = [&] {
    if (codebook == nullptr) throw std::invalid_argument(to_string(kind) + " needs a codebook");
    std::vector<std::vector<std::size_t>> out;
    for (const auto& h : train) {
      std::vector<std::size_t> row;
      for (const auto& p : h.parts) row.push_back(quantize(p.values, *codebook));
      out.push_back(std::move(row));
    }
    return out;
  };

  TrainedModel m;
  switch (kind) {
    case ModelKind::PR:
      m.parameters = PrRecommender{parse_pr_mode(c.pr_mode)};
      break;
    case ModelKind::CNNC:
      m.parameters = cnnc();
      break;
    case ModelKind::GMM: {
      std::vector<std::vector<double>> rows;
      for (const auto& r : words()) rows.emplace_back(r.begin(), r.end());
      auto t = gmm_train(rows, c.gmm_components, c.model_seed);
      warnings.insert(warnings.end(), t.warnings.begin(), t.warnings.end());
      m.parameters = GmmRecommender{std::move(t.model)};
      m.codebook_ref = codebook_ref;
      break;
    }
    case ModelKind::MCL: {
      MclOptions opt;
      opt.alpha = c.mcl_alpha;
      opt.eta = c.mcl_eta;
      opt.max_iterations = c.mcl_iterations;
      auto t = mcl_train(words(), codebook->size(), c.mcl_topics, c.model_seed, opt);
      m.parameters = MclRecommender{std::move(t.model),
                                    c.mcl_completion == "sample" ? MclCompletion::Sample : MclCompletion::Mode,
                                    c.model_seed};
      m.codebook_ref = codebook_ref;
      break;
    }
    case ModelKind::TAR:
      m.parameters = tar;
      break;
    case ModelKind::Hybrid:
      m.parameters = HybridRecommender{c.solid_threshold, cnnc(), tar};
      break;
  }
  return m;
}

json run_train(const PipelineConfig& c, const std::vector<ModelKind>& kinds) {
  const Workdir w{c.workdir};
  const SplitInfo info = load_split(w);
  const bool learned = std::any_of(kinds.begin(), kinds.end(), [](ModelKind k) {
    return k == ModelKind::CNNC || k == ModelKind::GMM || k == ModelKind::MCL || k == ModelKind::Hybrid;
  });
  const bool quantised = std::any_of(kinds.begin(), kinds.end(),
                                     [](ModelKind k) { return k == ModelKind::GMM || k == ModelKind::MCL; });

  std::vector<std::string> ids, warnings;
  std::vector<HolisticDescriptor> train;
  std::string feature = c.feature;
  if (learned || fs::exists(w.descriptors())) {
    const auto cache = load_cache(w.descriptors());
    feature = cache.feature;
    for (const auto& id : info.train) {
      if (auto h = holistic(cache, id, c.schema)) {
        ids.push_back(id);
        train.push_back(std::move(*h));
      } else {
        warnings.push_back("no descriptors for training image " + id);
      }
    }
    if (learned && train.empty()) throw DataError("no complete training images in the descriptor cache");
  }
  std::optional<Codebook> codebook;
  if (quantised) codebook = codebook_from_json(load_json(w.codebook()));

  json models = json::object();
  std::vector<std::string> artifacts;
  for (const auto kind : kinds) {
    if (kind == ModelKind::PR && feature != "hsv") {
      if (kinds.size() == 1) throw DataError("pr needs hsv descriptors");
      warnings.push_back("pr skipped: needs hsv descriptors");
      continue;
    }
    const auto m = train_model(kind, c, ids, train, codebook ? &*codebook : nullptr,
                               w.codebook().filename().string(), warnings);
    const auto path = w.model(to_string(kind));
    write_file_atomic(path, model_to_json(m).dump() + "\n");
    models[to_string(kind)] = path.string();
    artifacts.push_back(path.string());
  }
  return {{"models", models}, {"train_images", train.size()}, {"warnings", warnings_json(warnings)},
          {"artifacts", artifacts}};
}

json run_recommend(const PipelineConfig& c, const std::vector<ModelKind>& kinds,
                   const std::optional<std::string>& image) {
  const Workdir w{c.workdir};
  const auto cache = load_cache(w.descriptors());
  const std::string hidden = c.hidden_part();
  std::vector<std::string> queries;
  if (image) {
    queries.push_back(*image);
  } else {
    queries = load_split(w).test;
  }

  std::vector<std::string> warnings, artifacts;
  json counts = json::object();
  for (const auto kind : kinds) {
    if (kind == ModelKind::PR && cache.feature != "hsv") {
      if (kinds.size() == 1) throw DataError("pr needs hsv descriptors");
      warnings.push_back("pr skipped: needs hsv descriptors");
      continue;
    }
    const auto model_path = w.model(to_string(kind));
    if (!fs::exists(model_path) && kinds.size() > 1) {
      warnings.push_back("no trained " + to_string(kind) + " model");
      continue;
    }
    const TrainedModel model = model_from_json(load_json(model_path));
    std::optional<Codebook> codebook;
    if (model.needs_codebook()) codebook = codebook_from_json(load_json(resolve(c, model.codebook_ref)));

    std::string out;
    std::size_t n = 0;
    for (const auto& id : queries) {
      const auto query = holistic(cache, id, c.schema, &hidden);
      if (!query) {
        if (image) throw DataError("no visible-part descriptors for image " + id);
        warnings.push_back("no visible-part descriptors for image " + id);
        continue;
      }
      const auto rec = recommend(model, *query, codebook ? &*codebook : nullptr, id_seed(c.model_seed, id));
      json line = {{"query_id", id}, {"hidden", hidden}, {"descriptors", json::array()}};
      for (const auto& d : rec.descriptors) line["descriptors"].push_back(d.values);
      if (rec.codeword) line["codeword"] = *rec.codeword;
      if (rec.route) line["route"] = to_string(*rec.route);
      for (const auto& msg : rec.warnings) warnings.push_back(id + ": " + msg);
      out += line.dump() + "\n";
      ++n;
    }
    const auto path = w.recommendations(to_string(kind));
    write_file_atomic(path, out);
    counts[to_string(kind)] = n;
    artifacts.push_back(path.string());
  }
  return {{"hidden", hidden}, {"recommendations", counts}, {"warnings", warnings_json(warnings)},
          {"artifacts", artifacts}};
}

json run_retrieve(const PipelineConfig& c, const std::vector<ModelKind>& kinds) {
  const Workdir w{c.workdir};
  const std::string hidden = c.hidden_part();
  const auto cache = load_cache(c.inventory_path());
  std::vector<std::pair<std::string, PartDescriptor>> items;
  for (const auto& [key, d] : cache.entries())
    if (key.second == hidden) items.emplace_back(key.first, d);
  if (items.empty()) throw DataError("inventory has no '" + hidden + "' descriptors");
  const InventoryIndex index(std::move(items), parse_metric(c.metric));

  std::vector<std::string> warnings, artifacts;
  json summary = json::object();
  for (const auto kind : kinds) {
    const auto rec_path = w.recommendations(to_string(kind));
    if (!fs::exists(rec_path) && kinds.size() > 1) {
      warnings.push_back("no " + to_string(kind) + " recommendations");
      continue;
    }
    require_exists(rec_path);
    std::string out;
    std::size_t lists = 0, truncated = 0;
    for (const auto& text : read_lines(rec_path)) {
      const json line = json::parse(text);
      const std::string qid = line.at("query_id");
      std::vector<RankedList> ranked;
      for (const auto& d : line.at("descriptors"))
        ranked.push_back(index.query(PartDescriptor{d.get<std::vector<double>>()}, c.topk, qid));
      RankedList merged = ranked.size() == 1 ? ranked.front() : interleave(ranked, c.topk);
      merged.query_id = qid;
      truncated += merged.truncated;
      json entries = json::array();
      for (const auto& e : merged.entries) entries.push_back({{"id", e.id}, {"distance", e.distance}});
      out += json{{"query_id", qid}, {"k", c.topk}, {"truncated", merged.truncated}, {"entries", entries}}.dump() +
             "\n";
      ++lists;
    }
    const auto path = w.retrievals(to_string(kind));
    write_file_atomic(path, out);
    summary[to_string(kind)] = {{"lists", lists}, {"truncated", truncated}};
    artifacts.push_back(path.string());
  }
  if (artifacts.empty()) throw MissingArtifact(w.recommendations(to_string(kinds.front())));
  return {{"metric", to_string(index.metric())},
          {"topk", c.topk},
          {"inventory", index.size()},
          {"retrievals", summary},
          {"warnings", warnings_json(warnings)},
          {"artifacts", artifacts}};
}

json run_evaluate(const PipelineConfig& c) {
  if (c.ratings.empty()) throw ConfigError("no ratings file given");
  require_exists(c.ratings);
  const Workdir w{c.workdir};
  const RatingsTable table = parse_ratings_csv(read_file(c.ratings));

  EvaluationSummary s{evaluate(table), {}, std::nullopt, std::nullopt};
  const bool classed = std::all_of(table.records.begin(), table.records.end(),
                                   [](const RatingRecord& r) { return r.query_class.has_value(); });
  if (classed) {
    for (const auto cls : {PatternClass::Solid, PatternClass::Patterned}) {
      std::vector<RatingRecord> subset;
      for (const auto& r : table.records)
        if (r.query_class == cls) subset.push_back(r);
      if (!subset.empty()) s.per_class.emplace(to_string(cls), score(subset, s.overall.threshold, table.algorithms));
    }
    s.agreement = agreement_report(table.records, s.overall.threshold);
  }

  // Pair each rating with the list its algorithm retrieved, when available.
  std::vector<std::string> warnings;
  if (fs::exists(c.inventory_path())) {
    const auto cache = DescriptorCache::load(c.inventory_path());
    const std::string hidden = c.hidden_part();
    std::vector<RatedRetrieval> rated;
    for (std::size_t a = 0; a < table.algorithms.size(); ++a) {
      const auto path = w.retrievals(table.algorithms[a]);
      if (!fs::exists(path)) {
        warnings.push_back("no retrievals for " + table.algorithms[a]);
        continue;
      }
      std::map<std::string, std::vector<PartDescriptor>> lists;
      for (const auto& text : read_lines(path)) {
        const json line = json::parse(text);
        auto& list = lists[line.at("query_id").get<std::string>()];
        for (const auto& e : line.at("entries"))
          if (const auto* d = cache.find(e.at("id").get<std::string>(), hidden)) list.push_back(*d);
      }
      for (const auto& r : table.records)
        if (const auto it = lists.find(r.query_id); it != lists.end() && !it->second.empty())
          rated.push_back({r.ratings[a], it->second});
    }
    if (!rated.empty()) s.solid = solid_probability(rated, c.solid_threshold);
  }

  json scores = {{"overall", stats_to_json(s.overall)}, {"per_class", json::object()}};
  for (const auto& [cls, stats] : s.per_class) scores["per_class"][cls] = stats_to_json(stats);
  if (s.agreement) scores["agreement"] = report_to_json(*s.agreement);
  if (s.solid) {
    json sp = json::object();
    for (const auto& [rating, frac] : s.solid->mean_fraction)
      sp[std::to_string(rating)] = {{"mean_solid_fraction", frac}, {"lists", s.solid->lists.at(rating)}};
    scores["solid_probability"] = sp;
  }
  write_file_atomic(w.scores(), scores.dump(2) + "\n");
  write_file_atomic(w.evaluation_report(), render_evaluation_html(s));

  json normalized = json::object();
  for (std::size_t a = 0; a < s.overall.algorithms.size(); ++a)
    normalized[s.overall.algorithms[a]] = s.overall.normalized[a] ? json(*s.overall.normalized[a]) : json(nullptr);
  return {{"threshold", s.overall.threshold},
          {"queries", s.overall.queries.size()},
          {"excluded_queries", s.overall.excluded_queries},
          {"normalized", normalized},
          {"warnings", warnings_json(warnings)},
          {"artifacts", {w.scores().string(), w.evaluation_report().string()}}};
}

json run_report(const PipelineConfig& c) {
  const Workdir w{c.workdir};
  std::map<std::string, GalleryQuery> by_query;
  std::vector<std::string> algorithms;
  for (const auto kind : kAllModelKinds) {
    const auto path = w.retrievals(to_string(kind));
    if (!fs::exists(path)) continue;
    algorithms.push_back(to_string(kind));
    for (const auto& text : read_lines(path)) {
      const json line = json::parse(text);
      const std::string qid = line.at("query_id");
      auto& q = by_query[qid];
      q.query_id = qid;
      auto& ids = q.ranked[to_string(kind)];
      for (const auto& e : line.at("entries")) ids.push_back(e.at("id"));
    }
  }
  if (algorithms.empty()) throw MissingArtifact(w.root / "retrievals");

  std::map<std::string, ImageRecord> records;
  fs::path image_root;
  if (fs::exists(w.records()) && fs::exists(w.split())) {
    records = load_records(w, c.schema);
    image_root = load_split(w).image_root;
  }
  const ImageLookup lookup = [&](const std::string& id) -> std::optional<std::string> {
    const auto it = records.find(id);
    if (it == records.end()) return std::nullopt;
    const fs::path p = image_root / it->second.image_path;
    if (!fs::exists(p)) return std::nullopt;
    return p.string();
  };

  std::vector<GalleryQuery> queries;
  for (auto& [id, q] : by_query) queries.push_back(std::move(q));
  const Gallery g = build_gallery(queries, c.report_seed, lookup);
  const auto out = c.output_path();
  write_file_atomic(out, render_gallery_html(g));
  return {{"queries", g.grids.size()},
          {"algorithms", algorithms},
          {"seed", g.seed},
          {"warnings", warnings_json(g.warnings)},
          {"artifacts", {out.string()}}};
}

}  // namespace outfit::cli
