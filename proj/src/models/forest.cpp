#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

#include "sentrel/error.hpp"
#include "sentrel/models.hpp"

namespace sentrel::models {

namespace {

using Counts = std::array<double, kNumLabels>;

double total(const Counts& c) { return c[0] + c[1] + c[2]; }

// Gini impurity times the node weight: w * (1 - sum p^2) = w - sum c^2 / w.
double weighted_gini(const Counts& c) {
  const double w = total(c);
  if (w <= 0) return 0.0;
  return w - (c[0] * c[0] + c[1] * c[1] + c[2] * c[2]) / w;
}

bool is_pure(const Counts& c) {
  int nonzero = 0;
  for (double v : c) nonzero += v > 0;
  return nonzero <= 1;
}

struct Split {
  int feature = -1;
  double threshold = 0.0;
  double impurity = std::numeric_limits<double>::infinity();
};

class TreeBuilder {
 public:
  TreeBuilder(const Matrix& x, std::span<const Label> y, const ForestOptions& opt, std::mt19937_64& rng,
              const Counts& class_weight)
      : x_(x), y_(y), opt_(opt), rng_(rng), cw_(class_weight) {
    const std::size_t d = x.cols();
    mtry_ = opt.max_features > 0 ? std::min(opt.max_features, d)
                                 : std::max<std::size_t>(1, static_cast<std::size_t>(std::sqrt(static_cast<double>(d))));
    features_.resize(d);
    std::iota(features_.begin(), features_.end(), 0);
  }

  Tree build(std::vector<std::size_t> samples) {
    Tree tree;
    struct Task {
      int node;
      std::vector<std::size_t> samples;
      std::size_t depth;
    };
    tree.nodes.emplace_back();
    std::vector<Task> stack;
    stack.push_back({0, std::move(samples), 0});
    while (!stack.empty()) {
      Task task = std::move(stack.back());
      stack.pop_back();
      const Counts counts = count(task.samples);
      tree.nodes[task.node].counts = counts;
      const bool depth_done = opt_.max_depth > 0 && task.depth >= opt_.max_depth;
      if (is_pure(counts) || depth_done || task.samples.size() < 2 * opt_.min_leaf) continue;
      const Split split = find_split(task.samples);
      if (split.feature < 0) continue;

      std::vector<std::size_t> left;
      std::vector<std::size_t> right;
      for (auto i : task.samples) {
        (x_(i, static_cast<std::size_t>(split.feature)) <= split.threshold ? left : right).push_back(i);
      }
      const int l = static_cast<int>(tree.nodes.size());
      tree.nodes.emplace_back();
      tree.nodes.emplace_back();
      tree.nodes[task.node].feature = split.feature;
      tree.nodes[task.node].threshold = split.threshold;
      tree.nodes[task.node].left = l;
      tree.nodes[task.node].right = l + 1;
      stack.push_back({l + 1, std::move(right), task.depth + 1});
      stack.push_back({l, std::move(left), task.depth + 1});
    }
    return tree;
  }

 private:
  Counts count(const std::vector<std::size_t>& samples) const {
    Counts c{};
    for (auto i : samples) c[index_of(y_[i])] += cw_[index_of(y_[i])];
    return c;
  }

  // Best split over a random subset of mtry features. If none of them can
  // split the node, the remaining features are tried in random order until
  // one can.
  Split find_split(const std::vector<std::size_t>& samples) {
    Split best;
    const std::size_t d = features_.size();
    std::vector<std::pair<double, std::size_t>> vals(samples.size());
    for (std::size_t k = 0; k < d; ++k) {
      std::uniform_int_distribution<std::size_t> pick(k, d - 1);
      std::swap(features_[k], features_[pick(rng_)]);
      const std::size_t f = features_[k];
      for (std::size_t s = 0; s < samples.size(); ++s) vals[s] = {x_(samples[s], f), samples[s]};
      std::sort(vals.begin(), vals.end());
      if (vals.front().first == vals.back().first) {
        if (k + 1 >= mtry_ && best.feature >= 0) break;
        continue;
      }
      Counts left{};
      Counts right = count(samples);
      for (std::size_t s = 0; s + 1 < vals.size(); ++s) {
        const std::size_t i = vals[s].second;
        left[index_of(y_[i])] += cw_[index_of(y_[i])];
        right[index_of(y_[i])] -= cw_[index_of(y_[i])];
        if (vals[s].first == vals[s + 1].first) continue;
        if (s + 1 < opt_.min_leaf || vals.size() - s - 1 < opt_.min_leaf) continue;
        const double imp = weighted_gini(left) + weighted_gini(right);
        if (imp < best.impurity) {
          best.impurity = imp;
          best.feature = static_cast<int>(f);
          const double a = vals[s].first;
          const double b = vals[s + 1].first;
          double mid = a + (b - a) / 2.0;
          if (!(mid < b)) mid = a;
          best.threshold = mid;
        }
      }
      if (k + 1 >= mtry_ && best.feature >= 0) break;
    }
    return best;
  }

  const Matrix& x_;
  std::span<const Label> y_;
  const ForestOptions& opt_;
  std::mt19937_64& rng_;
  Counts cw_;
  std::size_t mtry_ = 1;
  std::vector<std::size_t> features_;
};

Counts class_weights(std::span<const Label> y, bool balanced) {
  Counts w{1.0, 1.0, 1.0};
  if (!balanced) return w;
  Counts n{};
  for (Label l : y) n[index_of(l)] += 1;
  double present = 0;
  for (double v : n) present += v > 0;
  for (std::size_t c = 0; c < kNumLabels; ++c) {
    w[c] = n[c] > 0 ? static_cast<double>(y.size()) / (present * n[c]) : 0.0;
  }
  return w;
}

Label leaf_label(const Counts& c) { return argmax_label(c); }

}  // namespace

Tree grow_tree(const Matrix& x, std::span<const Label> y, const ForestOptions& options, std::uint64_t tree_seed,
               const std::array<double, kNumLabels>& class_weight) {
  std::mt19937_64 rng(tree_seed);
  std::vector<std::size_t> samples(x.rows());
  if (options.bootstrap) {
    std::uniform_int_distribution<std::size_t> pick(0, x.rows() - 1);
    for (auto& s : samples) s = pick(rng);
  } else {
    std::iota(samples.begin(), samples.end(), 0);
  }
  TreeBuilder builder(x, y, options, rng, class_weight);
  return builder.build(std::move(samples));
}

ForestState train_forest(const Matrix& x, std::span<const Label> y, const ForestOptions& options, std::uint64_t seed,
                         Exec exec) {
  if (x.rows() == 0) throw Error("empty training set");
  if (options.trees == 0) throw std::invalid_argument("forest needs at least one tree");
  const Counts cw = class_weights(y, options.balanced);
  ForestState s;
  s.trees.resize(options.trees);
  const auto n = static_cast<long>(options.trees);
#pragma omp parallel for schedule(dynamic) if (exec == Exec::parallel)
  for (long t = 0; t < n; ++t) {
    s.trees[t] = grow_tree(x, y, options, seed + static_cast<std::uint64_t>(t), cw);
  }
  return s;
}

Label predict_tree(const Tree& tree, std::span<const double> row) {
  int node = 0;
  while (tree.nodes[node].feature >= 0) {
    const auto& nd = tree.nodes[node];
    node = row[static_cast<std::size_t>(nd.feature)] <= nd.threshold ? nd.left : nd.right;
  }
  return leaf_label(tree.nodes[node].counts);
}

Prediction predict_forest(const ForestState& s, const Matrix& x, Exec exec) {
  Prediction out;
  out.labels.resize(x.rows());
  out.scores = Matrix(x.rows(), kNumLabels);
  const auto n = static_cast<long>(x.rows());
  const double trees = static_cast<double>(s.trees.size());
#pragma omp parallel for schedule(static) if (exec == Exec::parallel)
  for (long i = 0; i < n; ++i) {
    Counts votes{};
    for (const auto& tree : s.trees) votes[index_of(predict_tree(tree, x.row(i)))] += 1;
    out.labels[i] = argmax_label(votes);
    for (std::size_t c = 0; c < kNumLabels; ++c) out.scores(i, c) = votes[c] / trees;
  }
  return out;
}

}  // namespace sentrel::models
