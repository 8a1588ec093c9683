#include <algorithm>
#include <numeric>
#include <random>
#include <set>

#include "sentrel/error.hpp"
#include "sentrel/eval.hpp"
#include "sentrel/models.hpp"

namespace sentrel::models {

std::vector<Hyperparams> expand_grid(const Grid& grid, const Hyperparams& base) {
  std::vector<Hyperparams> out{base};
  for (const auto& axis : grid) {
    if (axis.values.empty()) throw Error("grid axis '" + axis.name + "' has no values");
    std::vector<Hyperparams> next;
    for (const auto& partial : out) {
      for (double v : axis.values) {
        Hyperparams h = partial;
        h[axis.name] = v;
        next.push_back(std::move(h));
      }
    }
    out = std::move(next);
  }
  return out;
}

std::vector<std::vector<std::size_t>> stratified_folds(std::span<const Label> y, std::size_t folds,
                                                       std::uint64_t seed) {
  if (folds < 2) throw Error("cross validation needs at least 2 folds");
  std::mt19937_64 rng(seed);
  std::vector<std::vector<std::size_t>> out(folds);
  std::size_t next_fold = 0;
  for (Label cls : kAllLabels) {
    std::vector<std::size_t> rows;
    for (std::size_t i = 0; i < y.size(); ++i) {
      if (y[i] == cls) rows.push_back(i);
    }
    if (rows.empty()) continue;
    if (rows.size() < folds) {
      throw Error("class " + std::string(to_string(cls)) + " has " + std::to_string(rows.size()) +
                  " examples, fewer than " + std::to_string(folds) + " folds; use fewer folds");
    }
    std::shuffle(rows.begin(), rows.end(), rng);
    // Round-robin continues across classes so fold sizes stay balanced.
    for (auto r : rows) {
      out[next_fold].push_back(r);
      next_fold = (next_fold + 1) % folds;
    }
  }
  for (auto& f : out) std::sort(f.begin(), f.end());
  return out;
}

GridResult grid_search(Kind kind, const Grid& grid, const Matrix& x, std::span<const Label> y, std::size_t folds,
                       std::uint64_t seed, std::uint64_t manifest_id, const Hyperparams& base, Exec exec) {
  if (grid.empty()) throw Error("grid is empty");
  const auto points = expand_grid(grid, base);
  const auto test_folds = stratified_folds(y, folds, seed);

  struct Split {
    Matrix train_x, test_x;
    std::vector<Label> train_y, test_y;
  };
  std::vector<Split> splits;
  for (const auto& test : test_folds) {
    std::vector<bool> in_test(y.size(), false);
    for (auto i : test) in_test[i] = true;
    std::vector<std::size_t> train;
    for (std::size_t i = 0; i < y.size(); ++i) {
      if (!in_test[i]) train.push_back(i);
    }
    Split s;
    s.train_x = x.select(train);
    s.test_x = x.select(test);
    for (auto i : train) s.train_y.push_back(y[i]);
    for (auto i : test) s.test_y.push_back(y[i]);
    splits.push_back(std::move(s));
  }

  GridResult result;
  std::size_t best = 0;
  for (std::size_t p = 0; p < points.size(); ++p) {
    GridPoint gp;
    gp.params = resolve_hyperparams(kind, points[p]);
    for (const auto& s : splits) {
      const auto model = train(kind, s.train_x, s.train_y, gp.params, seed, manifest_id, exec);
      const auto pred = predict(model, s.test_x, manifest_id, exec);
      gp.fold_scores.push_back(eval::evaluate_labels(pred.labels, s.test_y).f1);
    }
    gp.mean_score = std::accumulate(gp.fold_scores.begin(), gp.fold_scores.end(), 0.0) /
                    static_cast<double>(gp.fold_scores.size());
    // Strictly greater: ties keep the earlier grid point.
    if (p == 0 || gp.mean_score > result.points[best].mean_score) best = p;
    result.points.push_back(std::move(gp));
  }
  result.best = result.points[best].params;
  result.model = train(kind, x, y, result.best, seed, manifest_id, exec);
  return result;
}

}  // namespace sentrel::models
