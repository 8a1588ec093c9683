#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "sentrel/error.hpp"
#include "sentrel/models.hpp"

namespace sentrel::models {

std::string_view to_string(Kind kind) {
  switch (kind) {
    case Kind::knn: return "knn";
    case Kind::gaussian_nb: return "gaussian-nb";
    case Kind::bernoulli_nb: return "bernoulli-nb";
    case Kind::linear_svm: return "linear-svm";
    case Kind::random_forest: return "random-forest";
  }
  return "?";
}

std::optional<Kind> parse_kind(std::string_view name) {
  for (Kind k : {Kind::knn, Kind::gaussian_nb, Kind::bernoulli_nb, Kind::linear_svm, Kind::random_forest}) {
    if (to_string(k) == name) return k;
  }
  return std::nullopt;
}

Hyperparams default_hyperparams(Kind kind) {
  switch (kind) {
    case Kind::knn: return {{"k", 5}};
    case Kind::gaussian_nb: return {{"var_smoothing", 1e-9}};
    case Kind::bernoulli_nb: return {{"alpha", 1.0}, {"binarize", 0.0}};
    case Kind::linear_svm: return {{"C", 1.0}, {"epochs", 50}, {"class_weight", 0}};
    case Kind::random_forest:
      return {{"trees", 100}, {"max_depth", 0}, {"min_leaf", 1}, {"bootstrap", 1}, {"max_features", 0},
              {"class_weight", 0}};
  }
  return {};
}

Hyperparams resolve_hyperparams(Kind kind, const Hyperparams& overrides) {
  Hyperparams out = default_hyperparams(kind);
  for (const auto& [key, value] : overrides) {
    const auto it = out.find(key);
    if (it == out.end()) {
      throw Error("unknown hyperparameter '" + key + "' for " + std::string(to_string(kind)));
    }
    if (!std::isfinite(value)) throw Error("hyperparameter '" + key + "' must be finite");
    it->second = value;
  }
  const auto at_least = [&](const char* key, double lo) {
    if (out.count(key) && out.at(key) < lo) {
      throw Error("hyperparameter '" + std::string(key) + "' must be >= " + std::to_string(lo));
    }
  };
  at_least("k", 1);
  at_least("trees", 1);
  at_least("min_leaf", 1);
  at_least("epochs", 1);
  at_least("max_depth", 0);
  at_least("max_features", 0);
  at_least("alpha", 0);
  at_least("var_smoothing", 0);
  if (out.count("C") && out.at("C") <= 0) throw Error("hyperparameter 'C' must be positive");
  return out;
}

LabelDistribution LabelDistribution::from_counts(double pos, double neg, double neu) {
  const double total = pos + neg + neu;
  if (!(total > 0)) throw std::invalid_argument("label distribution needs a positive total");
  LabelDistribution d;
  d.p = {pos / total, neg / total, neu / total};
  return d;
}

LabelDistribution LabelDistribution::from_labels(std::span<const Label> labels) {
  std::array<double, kNumLabels> c{};
  for (Label l : labels) c[index_of(l)] += 1;
  return from_counts(c[0], c[1], c[2]);
}

bool uses_scaling(Kind kind) { return kind == Kind::knn || kind == Kind::linear_svm; }

Label argmax_label(std::span<const double> scores, const ClassMask& allowed) {
  std::size_t best = kNumLabels;
  for (std::size_t c = 0; c < kNumLabels; ++c) {
    if (!allowed[c]) continue;
    if (best == kNumLabels || scores[c] > scores[best]) best = c;
  }
  if (best == kNumLabels) throw std::logic_error("argmax over an empty class set");
  return static_cast<Label>(best);
}

namespace {

void check_training_input(const Matrix& x, std::span<const Label> y) {
  if (x.rows() == 0) throw Error("empty training set");
  if (x.rows() != y.size()) throw std::invalid_argument("feature rows and labels differ in count");
  for (double v : x.data()) {
    if (!std::isfinite(v)) throw ValidationError("non-finite feature value in training set");
  }
}

std::size_t as_count(double v) { return static_cast<std::size_t>(std::llround(v)); }

}  // namespace

TrainedModel train(Kind kind, const Matrix& x, std::span<const Label> y, const Hyperparams& hyperparams,
                   std::uint64_t seed, std::uint64_t manifest_id, Exec exec) {
  check_training_input(x, y);
  TrainedModel model;
  model.kind = kind;
  model.hyperparams = resolve_hyperparams(kind, hyperparams);
  model.manifest_id = manifest_id;
  model.seed = seed;
  model.dim = x.cols();
  const auto& hp = model.hyperparams;

  Matrix scaled;
  if (uses_scaling(kind)) {
    model.scaler = features::Scaler::fit(x);
    scaled = model.scaler->apply(x);
  }
  switch (kind) {
    case Kind::knn:
      model.state = train_knn(scaled, y);
      break;
    case Kind::gaussian_nb:
      model.state = train_gaussian_nb(x, y, hp.at("var_smoothing"));
      break;
    case Kind::bernoulli_nb:
      model.state = train_bernoulli_nb(x, y, hp.at("alpha"), hp.at("binarize"));
      break;
    case Kind::linear_svm: {
      SvmOptions opt;
      opt.c = hp.at("C");
      opt.epochs = as_count(hp.at("epochs"));
      opt.balanced = hp.at("class_weight") != 0;
      model.state = train_svm(scaled, y, opt, seed, exec);
      break;
    }
    case Kind::random_forest: {
      ForestOptions opt;
      opt.trees = as_count(hp.at("trees"));
      opt.max_depth = as_count(hp.at("max_depth"));
      opt.min_leaf = as_count(hp.at("min_leaf"));
      opt.bootstrap = hp.at("bootstrap") != 0;
      opt.max_features = as_count(hp.at("max_features"));
      opt.balanced = hp.at("class_weight") != 0;
      model.state = train_forest(x, y, opt, seed, exec);
      break;
    }
  }
  return model;
}

Prediction predict(const TrainedModel& model, const Matrix& x, std::uint64_t manifest_id, Exec exec) {
  if (manifest_id != model.manifest_id) {
    throw ManifestError("feature manifest of the input differs from the one the model was trained on");
  }
  if (x.rows() > 0 && x.cols() != model.dim) {
    throw std::invalid_argument("input has " + std::to_string(x.cols()) + " features, model expects " +
                                std::to_string(model.dim));
  }
  const Matrix& input = x;
  Matrix scaled;
  if (model.scaler) scaled = model.scaler->apply(x);
  const Matrix& in = model.scaler ? scaled : input;
  return std::visit(
      [&](const auto& state) -> Prediction {
        using S = std::decay_t<decltype(state)>;
        if constexpr (std::is_same_v<S, KnnState>) {
          return predict_knn(state, as_count(model.hyperparams.at("k")), in, exec);
        } else if constexpr (std::is_same_v<S, GaussianNbState>) {
          return predict_gaussian_nb(state, in);
        } else if constexpr (std::is_same_v<S, BernoulliNbState>) {
          return predict_bernoulli_nb(state, in, model.hyperparams.at("binarize"));
        } else if constexpr (std::is_same_v<S, SvmState>) {
          return predict_svm(state, in);
        } else {
          return predict_forest(state, in, exec);
        }
      },
      model.state);
}

}  // namespace sentrel::models
