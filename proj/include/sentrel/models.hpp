#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "sentrel/features.hpp"
#include "sentrel/matrix.hpp"
#include "sentrel/parallel.hpp"
#include "sentrel/types.hpp"

namespace sentrel::models {

enum class Kind { knn, gaussian_nb, bernoulli_nb, linear_svm, random_forest };

std::string_view to_string(Kind kind);
std::optional<Kind> parse_kind(std::string_view name);

// Named numeric hyperparameters; every kind has a fixed key set with defaults.
using Hyperparams = std::map<std::string, double>;

Hyperparams default_hyperparams(Kind kind);
// Defaults overlaid with `overrides`. Throws Error on a key the kind does not know.
Hyperparams resolve_hyperparams(Kind kind, const Hyperparams& overrides);

struct LabelDistribution {
  std::array<double, kNumLabels> p{0.0, 0.0, 1.0};

  static LabelDistribution from_labels(std::span<const Label> labels);
  static LabelDistribution from_counts(double pos, double neg, double neu);
  double operator[](Label l) const { return p[index_of(l)]; }
};

using ClassMask = std::array<bool, kNumLabels>;

struct KnnState {
  Matrix x;
  std::vector<Label> y;
};

struct GaussianNbState {
  ClassMask present{};
  std::array<double, kNumLabels> log_prior{};
  Matrix mean;  // class x feature
  Matrix var;
  double epsilon = 0.0;
};

struct BernoulliNbState {
  ClassMask present{};
  std::array<double, kNumLabels> log_prior{};
  Matrix log_p;  // log P(x_j = 1 | c)
  Matrix log_q;  // log P(x_j = 0 | c)
};

struct SvmState {
  ClassMask present{};
  Matrix w;  // class x feature
  std::array<double, kNumLabels> b{};
  // Regularized hinge objective after each epoch, per class. Not serialized.
  std::array<std::vector<double>, kNumLabels> objective;
};

struct TreeNode {
  int feature = -1;  // -1 marks a leaf
  double threshold = 0.0;  // x <= threshold goes left
  int left = -1;
  int right = -1;
  std::array<double, kNumLabels> counts{};
};

struct Tree {
  std::vector<TreeNode> nodes;  // nodes[0] is the root
};

struct ForestState {
  std::vector<Tree> trees;
};

using ModelState = std::variant<KnnState, GaussianNbState, BernoulliNbState, SvmState, ForestState>;

struct TrainedModel {
  Kind kind = Kind::random_forest;
  Hyperparams hyperparams;
  std::uint64_t manifest_id = 0;
  std::uint64_t seed = 0;
  std::size_t dim = 0;
  // Present for the distance- and margin-based kinds, which consume scaled input.
  std::optional<features::Scaler> scaler;
  ModelState state;
};

struct Prediction {
  std::vector<Label> labels;
  // Per-class scores (n x 3): posteriors for NB, margins for SVM, vote
  // fractions for the forest, neighbor vote fractions for KNN.
  Matrix scores;
};

bool uses_scaling(Kind kind);

TrainedModel train(Kind kind, const Matrix& x, std::span<const Label> y, const Hyperparams& hyperparams = {},
                   std::uint64_t seed = 0, std::uint64_t manifest_id = 0, Exec exec = Exec::parallel);

// Throws ManifestError when `manifest_id` differs from the model's.
Prediction predict(const TrainedModel& model, const Matrix& x, std::uint64_t manifest_id, Exec exec = Exec::parallel);
inline Prediction predict(const TrainedModel& model, const Matrix& x, Exec exec = Exec::parallel) {
  return predict(model, x, model.manifest_id, exec);
}

// Label of the highest score; ties go to the earlier class (pos, neg, neu).
Label argmax_label(std::span<const double> scores, const ClassMask& allowed = {true, true, true});

// Per-kind entry points, also used directly by tests and benchmarks.
KnnState train_knn(const Matrix& x, std::span<const Label> y);
Prediction predict_knn(const KnnState& state, std::size_t k, const Matrix& x, Exec exec);

GaussianNbState train_gaussian_nb(const Matrix& x, std::span<const Label> y, double var_smoothing);
Prediction predict_gaussian_nb(const GaussianNbState& state, const Matrix& x);

BernoulliNbState train_bernoulli_nb(const Matrix& x, std::span<const Label> y, double alpha, double binarize);
Prediction predict_bernoulli_nb(const BernoulliNbState& state, const Matrix& x, double binarize);

struct SvmOptions {
  double c = 1.0;
  std::size_t epochs = 50;
  bool balanced = false;
};
SvmState train_svm(const Matrix& x, std::span<const Label> y, const SvmOptions& options, std::uint64_t seed, Exec exec);
Prediction predict_svm(const SvmState& state, const Matrix& x);
// Regularized hinge objective of the one-vs-rest problem for `cls`.
double svm_objective(const SvmState& state, Label cls, const Matrix& x, std::span<const Label> y, double lambda);

struct ForestOptions {
  std::size_t trees = 100;
  std::size_t max_depth = 0;  // 0 = unlimited
  std::size_t min_leaf = 1;
  bool bootstrap = true;
  std::size_t max_features = 0;  // 0 = floor(sqrt(d))
  bool balanced = false;
};
ForestState train_forest(const Matrix& x, std::span<const Label> y, const ForestOptions& options, std::uint64_t seed,
                         Exec exec);
Tree grow_tree(const Matrix& x, std::span<const Label> y, const ForestOptions& options, std::uint64_t tree_seed,
               const std::array<double, kNumLabels>& class_weight);
Label predict_tree(const Tree& tree, std::span<const double> row);
Prediction predict_forest(const ForestState& state, const Matrix& x, Exec exec);

// Baselines.
enum class BaselineKind { neg, pos, random, distr };
enum class DistrMode { three_class, polar_only };

std::string_view to_string(BaselineKind kind);
std::optional<BaselineKind> parse_baseline(std::string_view name);

std::vector<Label> baseline_predict(BaselineKind kind, std::size_t n, const std::optional<LabelDistribution>& train_dist,
                                    std::uint64_t seed, DistrMode mode = DistrMode::three_class);

// Grid search with stratified k-fold cross validation.
struct GridAxis {
  std::string name;
  std::vector<double> values;
};
using Grid = std::vector<GridAxis>;

struct GridPoint {
  Hyperparams params;
  std::vector<double> fold_scores;
  double mean_score = 0.0;
};

struct GridResult {
  Hyperparams best;
  TrainedModel model;
  std::vector<GridPoint> points;
};

// Cartesian product in listed order; the first axis varies slowest.
std::vector<Hyperparams> expand_grid(const Grid& grid, const Hyperparams& base = {});

// Fold index lists (test parts). Throws Error if some fold misses a class
// present in `y`.
std::vector<std::vector<std::size_t>> stratified_folds(std::span<const Label> y, std::size_t folds, std::uint64_t seed);

GridResult grid_search(Kind kind, const Grid& grid, const Matrix& x, std::span<const Label> y, std::size_t folds,
                       std::uint64_t seed, std::uint64_t manifest_id = 0, const Hyperparams& base = {},
                       Exec exec = Exec::parallel);

// Versioned JSON container. load refuses a manifest mismatch when
// `expected_manifest` is given.
std::string serialize(const TrainedModel& model);
TrainedModel deserialize(const std::string& text, std::optional<std::uint64_t> expected_manifest = std::nullopt);
void save(const TrainedModel& model, const std::filesystem::path& path);
TrainedModel load(const std::filesystem::path& path, std::optional<std::uint64_t> expected_manifest = std::nullopt);

}  // namespace sentrel::models
