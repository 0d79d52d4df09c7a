#include "outfit/recommenders/model.hpp"

#include <stdexcept>

namespace outfit {

using nlohmann::json;

namespace {

constexpr int kModelVersion = 1;

// splitmix64 finaliser; decorrelates a model seed from per-query seeds.
std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
  std::uint64_t z = a + 0x9e3779b97f4a7c15ULL * (b + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

json cnnc_to_json(const CnncRecommender& c) {
  json train = json::array();
  for (std::size_t i = 0; i < c.train.size(); ++i) {
    json parts = json::array();
    for (const auto& p : c.train[i].parts) parts.push_back(p.values);
    train.push_back({{"id", i < c.train_ids.size() ? c.train_ids[i] : std::to_string(i)},
                     {"parts", parts}});
  }
  return {{"neighbors", c.neighbors}, {"metric", to_string(c.metric)}, {"diverse", c.diverse},
          {"seed", c.seed},           {"train", train}};
}

CnncRecommender cnnc_from_json(const json& j) {
  CnncRecommender c;
  c.neighbors = j.at("neighbors").get<std::size_t>();
  c.metric = parse_metric(j.at("metric").get<std::string>());
  c.diverse = j.value("diverse", std::size_t{0});
  c.seed = j.value("seed", std::uint64_t{0});
  for (const json& t : j.at("train")) {
    c.train_ids.push_back(t.at("id").get<std::string>());
    HolisticDescriptor h;
    for (const json& p : t.at("parts")) {
      h.parts.emplace_back(p.get<std::vector<double>>());
      h.visible.push_back(true);
    }
    c.train.push_back(std::move(h));
  }
  return c;
}

json tar_to_json(const TarRecommender& t) { return {{"mode", to_string(t.mode)}, {"seed", t.seed}}; }

TarRecommender tar_from_json(const json& j) {
  return {parse_tar_mode(j.at("mode").get<std::string>()), j.at("seed").get<std::uint64_t>()};
}

}  // namespace

ModelKind parse_model_kind(const std::string& name) {
  if (name == "pr") return ModelKind::PR;
  if (name == "cnnc") return ModelKind::CNNC;
  if (name == "gmm") return ModelKind::GMM;
  if (name == "mcl") return ModelKind::MCL;
  if (name == "tar") return ModelKind::TAR;
  if (name == "hybrid") return ModelKind::Hybrid;
  throw std::invalid_argument("unknown model kind '" + name + "'");
}

std::string to_string(ModelKind k) {
  switch (k) {
    case ModelKind::PR: return "pr";
    case ModelKind::CNNC: return "cnnc";
    case ModelKind::GMM: return "gmm";
    case ModelKind::MCL: return "mcl";
    case ModelKind::TAR: return "tar";
    case ModelKind::Hybrid: return "hybrid";
  }
  return "?";
}

ModelKind TrainedModel::kind() const { return static_cast<ModelKind>(parameters.index()); }

bool TrainedModel::needs_codebook() const {
  return kind() == ModelKind::GMM || kind() == ModelKind::MCL;
}

PartDescriptor tar_recommend(const TarRecommender& model, std::size_t dims, std::uint64_t query_seed) {
  return tar_transform(dims, mix_seed(model.seed, query_seed), model.mode);
}

Recommendation cnnc_recommend(const CnncRecommender& model, const HolisticDescriptor& query) {
  const NeighborSet nn = cnnc_neighbors(query, model.train, std::min(model.neighbors, model.train.size()),
                                        model.metric);
  Recommendation r;
  if (model.diverse == 0) {
    r.descriptors.push_back(cnnc_consensus(nn));
  } else {
    DiverseSelection div = cnnc_diverse(nn, std::min(model.diverse, nn.size()), model.seed);
    r.descriptors = std::move(div.descriptors);
    r.warnings = std::move(div.warnings);
  }
  return r;
}

Recommendation hybrid_recommend(const HybridRecommender& model, const HolisticDescriptor& query,
                                std::uint64_t query_seed) {
  const PartDescriptor& garment = query.parts[reference_visible_part(query)];
  const PatternClass route = solid_pattern_classify(garment, model.threshold);
  Recommendation r;
  if (route == PatternClass::Solid) {
    r = cnnc_recommend(model.cnnc, query);
  } else {
    r.descriptors.push_back(tar_recommend(model.tar, garment.size(), query_seed));
  }
  r.route = route;
  return r;
}

Recommendation recommend(const TrainedModel& model, const HolisticDescriptor& query,
                         const Codebook* codebook, std::uint64_t query_seed) {
  if (model.needs_codebook() && codebook == nullptr)
    throw std::invalid_argument(to_string(model.kind()) + " needs a codebook");
  return std::visit(
      Overloaded{
          [&](const PrRecommender& m) {
            Recommendation r;
            r.descriptors = pr_transform(query, m.mode);
            return r;
          },
          [&](const CnncRecommender& m) { return cnnc_recommend(m, query); },
          [&](const GmmRecommender& m) {
            Recommendation r;
            std::size_t word = 0;
            r.descriptors.push_back(gmm_recommend(m.gmm, *codebook, query, &word));
            r.codeword = word;
            return r;
          },
          [&](const MclRecommender& m) {
            Recommendation r;
            std::size_t word = 0;
            r.descriptors.push_back(
                mcl_recommend(m.mcl, *codebook, query, m.completion, mix_seed(m.seed, query_seed), &word));
            r.codeword = word;
            return r;
          },
          [&](const TarRecommender& m) {
            Recommendation r;
            r.descriptors.push_back(
                tar_recommend(m, query.parts[reference_visible_part(query)].size(), query_seed));
            return r;
          },
          [&](const HybridRecommender& m) { return hybrid_recommend(m, query, query_seed); },
      },
      model.parameters);
}

json model_to_json(const TrainedModel& m) {
  json params = std::visit(
      Overloaded{
          [](const PrRecommender& p) -> json { return {{"mode", to_string(p.mode)}}; },
          [](const CnncRecommender& c) -> json { return cnnc_to_json(c); },
          [](const GmmRecommender& g) -> json {
            return {{"weights", g.gmm.weights}, {"means", g.gmm.means}, {"variances", g.gmm.variances}};
          },
          [](const MclRecommender& c) -> json {
            return {{"codewords", c.mcl.codewords},
                    {"parts", c.mcl.parts},
                    {"alpha", c.mcl.alpha},
                    {"eta", c.mcl.eta},
                    {"topic_weights", c.mcl.topic_weights},
                    {"initial", c.mcl.initial},
                    {"transitions", c.mcl.transitions},
                    {"completion", c.completion == MclCompletion::Mode ? "mode" : "sample"},
                    {"seed", c.seed}};
          },
          [](const TarRecommender& t) -> json { return tar_to_json(t); },
          [](const HybridRecommender& h) -> json {
            return {{"threshold", h.threshold}, {"cnnc", cnnc_to_json(h.cnnc)}, {"tar", tar_to_json(h.tar)}};
          },
      },
      m.parameters);
  return {{"version", kModelVersion},
          {"kind", to_string(m.kind())},
          {"codebook_ref", m.codebook_ref.empty() ? json(nullptr) : json(m.codebook_ref)},
          {"parameters", params}};
}

TrainedModel model_from_json(const json& j) {
  if (j.value("version", 0) != kModelVersion) throw std::invalid_argument("model: unsupported version");
  TrainedModel m;
  if (j.contains("codebook_ref") && j["codebook_ref"].is_string()) m.codebook_ref = j["codebook_ref"];
  const json& p = j.at("parameters");
  switch (parse_model_kind(j.at("kind").get<std::string>())) {
    case ModelKind::PR:
      m.parameters = PrRecommender{parse_pr_mode(p.at("mode").get<std::string>())};
      break;
    case ModelKind::CNNC:
      m.parameters = cnnc_from_json(p);
      break;
    case ModelKind::GMM: {
      GmmRecommender g;
      g.gmm.weights = p.at("weights").get<std::vector<double>>();
      g.gmm.means = p.at("means").get<std::vector<std::vector<double>>>();
      g.gmm.variances = p.at("variances").get<std::vector<std::vector<double>>>();
      if (g.gmm.means.size() != g.gmm.weights.size() || g.gmm.variances.size() != g.gmm.weights.size())
        throw std::invalid_argument("model: inconsistent GMM component counts");
      m.parameters = std::move(g);
      break;
    }
    case ModelKind::MCL: {
      MclRecommender c;
      c.mcl.codewords = p.at("codewords").get<std::size_t>();
      c.mcl.parts = p.at("parts").get<std::size_t>();
      c.mcl.alpha = p.at("alpha").get<double>();
      c.mcl.eta = p.at("eta").get<double>();
      c.mcl.topic_weights = p.at("topic_weights").get<std::vector<double>>();
      c.mcl.initial = p.at("initial").get<std::vector<double>>();
      c.mcl.transitions = p.at("transitions").get<std::vector<std::vector<std::vector<double>>>>();
      c.completion = p.value("completion", std::string("mode")) == "sample" ? MclCompletion::Sample
                                                                          : MclCompletion::Mode;
      c.seed = p.value("seed", std::uint64_t{0});
      m.parameters = std::move(c);
      break;
    }
    case ModelKind::TAR:
      m.parameters = tar_from_json(p);
      break;
    case ModelKind::Hybrid:
      m.parameters = HybridRecommender{p.at("threshold").get<double>(), cnnc_from_json(p.at("cnnc")),
                                       tar_from_json(p.at("tar"))};
      break;
  }
  return m;
}

}  // namespace outfit
