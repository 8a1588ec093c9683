#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>

#include "sentrel/error.hpp"
#include "sentrel/models.hpp"

namespace sentrel::models {

namespace {

struct BinaryProblem {
  std::vector<double> target;  // +1 / -1
  std::vector<double> weight;
};

BinaryProblem one_vs_rest(std::span<const Label> y, Label cls, bool balanced) {
  BinaryProblem p;
  p.target.resize(y.size());
  p.weight.assign(y.size(), 1.0);
  double n_pos = 0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    p.target[i] = y[i] == cls ? 1.0 : -1.0;
    n_pos += y[i] == cls;
  }
  if (balanced) {
    const double n = static_cast<double>(y.size());
    const double n_neg = n - n_pos;
    for (std::size_t i = 0; i < y.size(); ++i) {
      p.weight[i] = p.target[i] > 0 ? n / (2.0 * n_pos) : n / (2.0 * n_neg);
    }
  }
  return p;
}

double objective(std::span<const double> w, double b, const Matrix& x, const BinaryProblem& p, double lambda) {
  double reg = 0.0;
  for (double v : w) reg += v * v;
  double loss = 0.0;
  for (std::size_t i = 0; i < x.rows(); ++i) {
    const auto r = x.row(i);
    const double margin = p.target[i] * (std::inner_product(r.begin(), r.end(), w.begin(), 0.0) + b);
    loss += p.weight[i] * std::max(0.0, 1.0 - margin);
  }
  return 0.5 * lambda * reg + loss / static_cast<double>(x.rows());
}

// Subgradient descent on lambda/2 |w|^2 + mean weighted hinge, visiting rows
// in a fixed order each epoch with step 1 / (lambda t). The bias is not
// regularized.
void solve(const Matrix& x, const BinaryProblem& p, std::span<const std::size_t> order, double lambda,
           std::size_t epochs, std::span<double> w, double& b, std::vector<double>& trace) {
  std::fill(w.begin(), w.end(), 0.0);
  b = 0.0;
  trace.clear();
  std::size_t t = 0;
  for (std::size_t e = 0; e < epochs; ++e) {
    for (auto i : order) {
      ++t;
      const double eta = 1.0 / (lambda * static_cast<double>(t));
      const auto r = x.row(i);
      const double margin = p.target[i] * (std::inner_product(r.begin(), r.end(), w.begin(), 0.0) + b);
      const double shrink = 1.0 - eta * lambda;
      for (auto& v : w) v *= shrink;
      if (margin < 1.0) {
        const double g = eta * p.weight[i] * p.target[i];
        for (std::size_t j = 0; j < w.size(); ++j) w[j] += g * r[j];
        b += g;
      }
    }
    trace.push_back(objective(w, b, x, p, lambda));
  }
}

}  // namespace

SvmState train_svm(const Matrix& x, std::span<const Label> y, const SvmOptions& options, std::uint64_t seed,
                   Exec exec) {
  if (x.rows() == 0) throw Error("empty training set");
  SvmState s;
  s.w = Matrix(kNumLabels, x.cols());
  for (Label l : y) s.present[index_of(l)] = true;
  const std::size_t n_present = static_cast<std::size_t>(std::count(s.present.begin(), s.present.end(), true));

  std::vector<std::size_t> order(x.rows());
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);

  const double lambda = 1.0 / options.c;
  if (n_present < 2) return s;  // a single class is predicted everywhere

#pragma omp parallel for schedule(static) if (exec == Exec::parallel)
  for (int c = 0; c < static_cast<int>(kNumLabels); ++c) {
    if (!s.present[c]) continue;
    const auto problem = one_vs_rest(y, static_cast<Label>(c), options.balanced);
    solve(x, problem, order, lambda, options.epochs, s.w.row(c), s.b[c], s.objective[c]);
  }
  return s;
}

Prediction predict_svm(const SvmState& s, const Matrix& x) {
  Prediction out;
  out.labels.resize(x.rows());
  out.scores = Matrix(x.rows(), kNumLabels);
  for (std::size_t i = 0; i < x.rows(); ++i) {
    const auto r = x.row(i);
    auto sc = out.scores.row(i);
    for (std::size_t c = 0; c < kNumLabels; ++c) {
      const auto w = s.w.row(c);
      sc[c] = s.present[c] ? std::inner_product(r.begin(), r.end(), w.begin(), 0.0) + s.b[c]
                           : -std::numeric_limits<double>::infinity();
    }
    out.labels[i] = argmax_label(sc, s.present);
  }
  return out;
}

double svm_objective(const SvmState& s, Label cls, const Matrix& x, std::span<const Label> y, double lambda) {
  return objective(s.w.row(index_of(cls)), s.b[index_of(cls)], x, one_vs_rest(y, cls, false), lambda);
}

}  // namespace sentrel::models
