#include "sentrel/config.hpp"

#include <algorithm>
#include <set>

#include "sentrel/error.hpp"
#include "sentrel/text.hpp"

namespace sentrel {

namespace fs = std::filesystem;
using nlohmann::json;

models::Grid default_grid(models::Kind kind) {
  switch (kind) {
    case models::Kind::linear_svm: return {{"C", {0.1, 1, 10, 100}}};
    case models::Kind::random_forest: return {{"trees", {50, 100, 200}}, {"max_depth", {0, 10, 20}}};
    case models::Kind::knn: return {{"k", {1, 3, 5, 10, 25}}};
    case models::Kind::gaussian_nb: return {{"var_smoothing", {1e-9, 1e-6, 1e-3}}};
    case models::Kind::bernoulli_nb: return {{"alpha", {0.5, 1.0, 2.0}}};
  }
  return {};
}

namespace {

std::vector<std::string> read_ids(const fs::path& path) {
  std::vector<std::string> out;
  for (const auto& line : text::read_lines(path)) {
    const auto t = text::trim(line);
    if (!t.empty() && t.front() != '#') out.emplace_back(t);
  }
  return out;
}

}  // namespace

RunConfig RunConfig::from_json(const json& j, const fs::path& base_dir) {
  static const std::set<std::string> known = {
      "corpus_dir", "synonyms", "lexicon", "embeddings", "countries", "capitals", "output_dir",
      "train_ids", "test_ids", "train_ids_file", "test_ids_file", "classifier", "hyperparams", "grid",
      "folds", "features", "direction_specific", "aggregation", "distr_mode", "seed", "workers"};
  if (!j.is_object()) throw Error("config must be a JSON object");
  for (const auto& [key, _] : j.items()) {
    if (!known.count(key)) throw Error("unknown config key '" + key + "'");
  }
  const auto path_of = [&](const char* key) { return base_dir / j.at(key).get<std::string>(); };
  const auto opt_path = [&](const char* key) -> std::optional<fs::path> {
    if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
    return path_of(key);
  };

  RunConfig c;
  try {
    if (!j.contains("corpus_dir")) throw Error("config needs 'corpus_dir'");
    c.corpus_dir = path_of("corpus_dir");
    if (!j.contains("synonyms")) throw Error("config needs 'synonyms'");
    c.synonyms = path_of("synonyms");
    c.lexicon = opt_path("lexicon");
    c.embeddings = opt_path("embeddings");
    c.countries = opt_path("countries");
    c.capitals = opt_path("capitals");
    if (j.contains("output_dir")) c.output_dir = path_of("output_dir");
    else c.output_dir = base_dir / "out";

    for (auto [ids, list_key, file_key] : {std::tuple{&c.train_ids, "train_ids", "train_ids_file"},
                                           std::tuple{&c.test_ids, "test_ids", "test_ids_file"}}) {
      if (j.contains(list_key)) *ids = j.at(list_key).get<std::vector<std::string>>();
      if (j.contains(file_key)) {
        const auto p = path_of(file_key);
        if (!fs::exists(p)) throw IoError("split list not found: " + p.string());
        const auto more = read_ids(p);
        ids->insert(ids->end(), more.begin(), more.end());
      }
    }

    if (j.contains("classifier")) {
      const auto name = j.at("classifier").get<std::string>();
      const auto kind = models::parse_kind(name);
      if (!kind) throw Error("unknown classifier '" + name + "'");
      c.classifier = *kind;
    }
    if (j.contains("hyperparams")) c.hyperparams = j.at("hyperparams").get<models::Hyperparams>();
    if (j.contains("grid")) {
      for (const auto& axis : j.at("grid")) {
        c.grid.push_back({axis.at("name").get<std::string>(), axis.at("values").get<std::vector<double>>()});
      }
    }
    if (j.contains("folds")) c.folds = j.at("folds").get<std::size_t>();
    if (j.contains("features")) {
      static const std::set<std::string> toggles = {"similarity", "entity_type", "geo_lists",
                                                    "frequency", "order", "context"};
      for (const auto& [key, value] : j.at("features").items()) {
        if (!toggles.count(key)) throw Error("unknown feature toggle '" + key + "'");
        const bool on = value.get<bool>();
        if (key == "similarity") c.features.similarity = on;
        if (key == "entity_type") c.features.entity_type = on;
        if (key == "geo_lists") c.features.geo_lists = on;
        if (key == "frequency") c.features.frequency = on;
        if (key == "order") c.features.order = on;
        if (key == "context") c.features.context = on;
      }
    }
    if (j.contains("direction_specific")) c.pairing.direction_specific = j.at("direction_specific").get<bool>();
    if (j.contains("aggregation")) {
      const auto a = eval::parse_aggregation(j.at("aggregation").get<std::string>());
      if (!a) throw Error("aggregation must be 'global' or 'per-document'");
      c.aggregation = *a;
    }
    if (j.contains("distr_mode")) {
      const auto m = j.at("distr_mode").get<std::string>();
      if (m == "three-class") c.distr_mode = models::DistrMode::three_class;
      else if (m == "polar-only") c.distr_mode = models::DistrMode::polar_only;
      else throw Error("distr_mode must be 'three-class' or 'polar-only'");
    }
    if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("workers")) c.workers = j.at("workers").get<int>();
  } catch (const json::exception& e) {
    throw Error(std::string("bad config value: ") + e.what());
  }
  // Fail early on unknown hyperparameter names.
  models::resolve_hyperparams(c.classifier, c.hyperparams);
  return c;
}

RunConfig RunConfig::load(const fs::path& path) {
  if (!fs::exists(path)) throw IoError("config not found: " + path.string());
  json j;
  try {
    j = json::parse(text::read_file(path));
  } catch (const json::parse_error& e) {
    throw Error(path.string() + ": " + e.what());
  }
  return from_json(j, path.parent_path());
}

json RunConfig::to_json() const {
  const auto opt = [](const std::optional<fs::path>& p) { return p ? json(p->generic_string()) : json(nullptr); };
  json grid_json = json::array();
  for (const auto& axis : grid.empty() ? default_grid(classifier) : grid) {
    grid_json.push_back(json{{"name", axis.name}, {"values", axis.values}});
  }
  return json{{"corpus_dir", corpus_dir.generic_string()},
              {"synonyms", synonyms.generic_string()},
              {"lexicon", opt(lexicon)},
              {"embeddings", opt(embeddings)},
              {"countries", opt(countries)},
              {"capitals", opt(capitals)},
              {"output_dir", output_dir.generic_string()},
              {"train_ids", train_ids},
              {"test_ids", test_ids},
              {"classifier", std::string(models::to_string(classifier))},
              {"hyperparams", models::resolve_hyperparams(classifier, hyperparams)},
              {"grid", grid_json},
              {"folds", folds},
              {"features",
               {{"similarity", features.similarity},
                {"entity_type", features.entity_type},
                {"geo_lists", features.geo_lists},
                {"frequency", features.frequency},
                {"order", features.order},
                {"context", features.context}}},
              {"direction_specific", pairing.direction_specific},
              {"aggregation", std::string(eval::to_string(aggregation))},
              {"distr_mode", distr_mode == models::DistrMode::three_class ? "three-class" : "polar-only"},
              {"seed", seed},
              {"workers", workers}};
}

std::string RunConfig::hash_hex() const { return text::hex64(text::fnv1a64(to_json().dump())); }

void RunConfig::validate() const {
  std::set<std::string> train(train_ids.begin(), train_ids.end());
  for (const auto& id : test_ids) {
    if (train.count(id)) throw Error("document '" + id + "' is in both the train and the test split");
  }
  const auto must_exist = [](const fs::path& p, const char* what) {
    if (!fs::exists(p)) throw IoError(std::string(what) + " not found: " + p.string());
  };
  must_exist(corpus_dir, "corpus directory");
  must_exist(synonyms, "synonyms file");
  for (const auto& [p, what] : {std::pair{&lexicon, "lexicon"}, std::pair{&embeddings, "embeddings file"},
                                std::pair{&countries, "country list"}, std::pair{&capitals, "capital list"}}) {
    if (*p) must_exist(**p, what);
  }
  if (folds < 2) throw Error("folds must be at least 2");
}

}  // namespace sentrel
