#include <fstream>

#include <json.hpp>

#include "sentrel/error.hpp"
#include "sentrel/models.hpp"
#include "sentrel/text.hpp"

namespace sentrel::models {

namespace {

using nlohmann::json;

constexpr const char* kFormat = "sentrel-model";
constexpr int kVersion = 1;

json matrix_json(const Matrix& m) { return json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", m.data()}}; }

Matrix matrix_from(const json& j) {
  Matrix m(j.at("rows").get<std::size_t>(), j.at("cols").get<std::size_t>());
  const auto data = j.at("data").get<std::vector<double>>();
  if (data.size() != m.rows() * m.cols()) throw Error("model file: matrix size mismatch");
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t k = 0; k < m.cols(); ++k) m(i, k) = data[i * m.cols() + k];
  }
  return m;
}

std::vector<int> labels_json(std::span<const Label> y) {
  std::vector<int> out;
  out.reserve(y.size());
  for (Label l : y) out.push_back(static_cast<int>(l));
  return out;
}

Label label_from(int v) {
  if (v < 0 || v >= static_cast<int>(kNumLabels)) throw Error("model file: bad label");
  return static_cast<Label>(v);
}

// Infinite log priors of absent classes are stored as null.
json log_prior_json(const std::array<double, kNumLabels>& lp, const ClassMask& present) {
  json out = json::array();
  for (std::size_t c = 0; c < kNumLabels; ++c) out.push_back(present[c] ? json(lp[c]) : json(nullptr));
  return out;
}

std::array<double, kNumLabels> log_prior_from(const json& j, ClassMask& present) {
  std::array<double, kNumLabels> out{};
  for (std::size_t c = 0; c < kNumLabels; ++c) {
    present[c] = !j.at(c).is_null();
    out[c] = present[c] ? j.at(c).get<double>() : -std::numeric_limits<double>::infinity();
  }
  return out;
}

json state_json(const ModelState& state) {
  return std::visit(
      [](const auto& s) -> json {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, KnnState>) {
          return json{{"x", matrix_json(s.x)}, {"y", labels_json(s.y)}};
        } else if constexpr (std::is_same_v<S, GaussianNbState>) {
          return json{{"log_prior", log_prior_json(s.log_prior, s.present)},
                      {"mean", matrix_json(s.mean)},
                      {"var", matrix_json(s.var)},
                      {"epsilon", s.epsilon}};
        } else if constexpr (std::is_same_v<S, BernoulliNbState>) {
          return json{{"log_prior", log_prior_json(s.log_prior, s.present)},
                      {"log_p", matrix_json(s.log_p)},
                      {"log_q", matrix_json(s.log_q)}};
        } else if constexpr (std::is_same_v<S, SvmState>) {
          return json{{"present", s.present}, {"w", matrix_json(s.w)}, {"b", s.b}};
        } else {
          json trees = json::array();
          for (const auto& t : s.trees) {
            json nodes = json::array();
            for (const auto& n : t.nodes) {
              nodes.push_back(json::array({n.feature, n.threshold, n.left, n.right, n.counts}));
            }
            trees.push_back(std::move(nodes));
          }
          return json{{"trees", std::move(trees)}};
        }
      },
      state);
}

ModelState state_from(Kind kind, const json& j) {
  switch (kind) {
    case Kind::knn: {
      KnnState s;
      s.x = matrix_from(j.at("x"));
      for (int v : j.at("y").get<std::vector<int>>()) s.y.push_back(label_from(v));
      if (s.y.size() != s.x.rows()) throw Error("model file: KNN label count mismatch");
      return s;
    }
    case Kind::gaussian_nb: {
      GaussianNbState s;
      s.log_prior = log_prior_from(j.at("log_prior"), s.present);
      s.mean = matrix_from(j.at("mean"));
      s.var = matrix_from(j.at("var"));
      s.epsilon = j.at("epsilon").get<double>();
      return s;
    }
    case Kind::bernoulli_nb: {
      BernoulliNbState s;
      s.log_prior = log_prior_from(j.at("log_prior"), s.present);
      s.log_p = matrix_from(j.at("log_p"));
      s.log_q = matrix_from(j.at("log_q"));
      return s;
    }
    case Kind::linear_svm: {
      SvmState s;
      s.present = j.at("present").get<ClassMask>();
      s.w = matrix_from(j.at("w"));
      s.b = j.at("b").get<std::array<double, kNumLabels>>();
      return s;
    }
    case Kind::random_forest: {
      ForestState s;
      for (const auto& tj : j.at("trees")) {
        Tree t;
        for (const auto& nj : tj) {
          TreeNode n;
          n.feature = nj.at(0).get<int>();
          n.threshold = nj.at(1).get<double>();
          n.left = nj.at(2).get<int>();
          n.right = nj.at(3).get<int>();
          n.counts = nj.at(4).get<std::array<double, kNumLabels>>();
          t.nodes.push_back(n);
        }
        const int size = static_cast<int>(t.nodes.size());
        for (const auto& n : t.nodes) {
          if (n.feature >= 0 && (n.left <= 0 || n.left >= size || n.right <= 0 || n.right >= size)) {
            throw Error("model file: corrupt tree");
          }
        }
        if (t.nodes.empty()) throw Error("model file: empty tree");
        s.trees.push_back(std::move(t));
      }
      return s;
    }
  }
  throw Error("model file: unknown kind");
}

}  // namespace

std::string serialize(const TrainedModel& model) {
  json j;
  j["format"] = kFormat;
  j["version"] = kVersion;
  j["kind"] = std::string(to_string(model.kind));
  j["manifest"] = text::hex64(model.manifest_id);
  j["seed"] = model.seed;
  j["dim"] = model.dim;
  j["hyperparams"] = model.hyperparams;
  if (model.scaler) {
    j["scaler"] = json{{"mean", model.scaler->mean()}, {"std", model.scaler->stddev()}};
  }
  j["state"] = state_json(model.state);
  return j.dump() + "\n";
}

TrainedModel deserialize(const std::string& text, std::optional<std::uint64_t> expected_manifest) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(std::string("model file is not valid JSON: ") + e.what());
  }
  try {
    if (j.at("format").get<std::string>() != kFormat) throw Error("not a sentrel model file");
    if (j.at("version").get<int>() != kVersion) {
      throw Error("unsupported model version " + std::to_string(j.at("version").get<int>()));
    }
    TrainedModel m;
    const auto kind = parse_kind(j.at("kind").get<std::string>());
    if (!kind) throw Error("unknown model kind " + j.at("kind").get<std::string>());
    m.kind = *kind;
    m.manifest_id = std::stoull(j.at("manifest").get<std::string>(), nullptr, 16);
    if (expected_manifest && *expected_manifest != m.manifest_id) {
      throw ManifestError("model was trained with feature manifest " + text::hex64(m.manifest_id) +
                          ", current manifest is " + text::hex64(*expected_manifest));
    }
    m.seed = j.at("seed").get<std::uint64_t>();
    m.dim = j.at("dim").get<std::size_t>();
    m.hyperparams = j.at("hyperparams").get<Hyperparams>();
    if (j.contains("scaler")) {
      m.scaler = features::Scaler(j.at("scaler").at("mean").get<std::vector<double>>(),
                                  j.at("scaler").at("std").get<std::vector<double>>());
    }
    m.state = state_from(m.kind, j.at("state"));
    return m;
  } catch (const json::exception& e) {
    throw Error(std::string("malformed model file: ") + e.what());
  }
}

void save(const TrainedModel& model, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << serialize(model);
}

TrainedModel load(const std::filesystem::path& path, std::optional<std::uint64_t> expected_manifest) {
  return deserialize(text::read_file(path), expected_manifest);
}

}  // namespace sentrel::models
