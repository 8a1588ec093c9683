#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "sentrel/models.hpp"

namespace sentrel::models {

namespace {

// Sums are taken over sorted values so learned state does not depend on
// training-row order.
double sorted_sum(std::vector<double>& v) {
  std::sort(v.begin(), v.end());
  return std::accumulate(v.begin(), v.end(), 0.0);
}

std::array<std::vector<std::size_t>, kNumLabels> rows_by_class(std::span<const Label> y) {
  std::array<std::vector<std::size_t>, kNumLabels> out;
  for (std::size_t i = 0; i < y.size(); ++i) out[index_of(y[i])].push_back(i);
  return out;
}

// Normalizes log joint scores into posteriors in place and returns the label.
Label normalize(std::span<double> logp, const ClassMask& present) {
  const Label label = argmax_label(logp, present);
  const double top = logp[index_of(label)];
  double z = 0.0;
  for (std::size_t c = 0; c < kNumLabels; ++c) {
    if (present[c]) z += std::exp(logp[c] - top);
  }
  for (std::size_t c = 0; c < kNumLabels; ++c) {
    logp[c] = present[c] ? std::exp(logp[c] - top) / z : 0.0;
  }
  return label;
}

}  // namespace

GaussianNbState train_gaussian_nb(const Matrix& x, std::span<const Label> y, double var_smoothing) {
  const std::size_t d = x.cols();
  const auto by_class = rows_by_class(y);
  GaussianNbState s;
  s.mean = Matrix(kNumLabels, d);
  s.var = Matrix(kNumLabels, d);

  // epsilon = var_smoothing * largest per-feature variance over all rows.
  double max_var = 0.0;
  std::vector<double> col(x.rows());
  for (std::size_t j = 0; j < d; ++j) {
    for (std::size_t i = 0; i < x.rows(); ++i) col[i] = x(i, j);
    const double mu = sorted_sum(col) / static_cast<double>(col.size());
    for (std::size_t i = 0; i < x.rows(); ++i) col[i] = (x(i, j) - mu) * (x(i, j) - mu);
    max_var = std::max(max_var, sorted_sum(col) / static_cast<double>(col.size()));
  }
  // All-constant input would leave zero variances; fall back to the bare factor.
  s.epsilon = max_var > 0 ? var_smoothing * max_var : std::max(var_smoothing, 1e-300);

  for (std::size_t c = 0; c < kNumLabels; ++c) {
    const auto& rows = by_class[c];
    s.present[c] = !rows.empty();
    if (rows.empty()) {
      s.log_prior[c] = -std::numeric_limits<double>::infinity();
      continue;
    }
    s.log_prior[c] = std::log(static_cast<double>(rows.size()) / static_cast<double>(y.size()));
    std::vector<double> vals(rows.size());
    for (std::size_t j = 0; j < d; ++j) {
      for (std::size_t k = 0; k < rows.size(); ++k) vals[k] = x(rows[k], j);
      const double mu = sorted_sum(vals) / static_cast<double>(rows.size());
      for (std::size_t k = 0; k < rows.size(); ++k) vals[k] = (x(rows[k], j) - mu) * (x(rows[k], j) - mu);
      s.mean(c, j) = mu;
      s.var(c, j) = sorted_sum(vals) / static_cast<double>(rows.size()) + s.epsilon;
    }
  }
  return s;
}

Prediction predict_gaussian_nb(const GaussianNbState& s, const Matrix& x) {
  Prediction out;
  out.labels.resize(x.rows());
  out.scores = Matrix(x.rows(), kNumLabels);
  for (std::size_t i = 0; i < x.rows(); ++i) {
    auto logp = out.scores.row(i);
    for (std::size_t c = 0; c < kNumLabels; ++c) {
      if (!s.present[c]) {
        logp[c] = -std::numeric_limits<double>::infinity();
        continue;
      }
      double acc = s.log_prior[c];
      for (std::size_t j = 0; j < x.cols(); ++j) {
        const double v = s.var(c, j);
        const double dx = x(i, j) - s.mean(c, j);
        acc += -0.5 * std::log(2.0 * std::numbers::pi * v) - dx * dx / (2.0 * v);
      }
      logp[c] = acc;
    }
    out.labels[i] = normalize(logp, s.present);
  }
  return out;
}

BernoulliNbState train_bernoulli_nb(const Matrix& x, std::span<const Label> y, double alpha, double binarize) {
  const std::size_t d = x.cols();
  const auto by_class = rows_by_class(y);
  BernoulliNbState s;
  s.log_p = Matrix(kNumLabels, d);
  s.log_q = Matrix(kNumLabels, d);
  for (std::size_t c = 0; c < kNumLabels; ++c) {
    const auto& rows = by_class[c];
    s.present[c] = !rows.empty();
    if (rows.empty()) {
      s.log_prior[c] = -std::numeric_limits<double>::infinity();
      continue;
    }
    s.log_prior[c] = std::log(static_cast<double>(rows.size()) / static_cast<double>(y.size()));
    const double n = static_cast<double>(rows.size());
    for (std::size_t j = 0; j < d; ++j) {
      double ones = 0;
      for (auto r : rows) ones += x(r, j) > binarize;
      // alpha = 0 with an all-zero or all-one column would give log(0); keep
      // probabilities strictly inside (0, 1).
      double p = (ones + alpha) / (n + 2.0 * alpha);
      p = std::clamp(p, 1e-12, 1.0 - 1e-12);
      s.log_p(c, j) = std::log(p);
      s.log_q(c, j) = std::log1p(-p);
    }
  }
  return s;
}

Prediction predict_bernoulli_nb(const BernoulliNbState& s, const Matrix& x, double binarize) {
  Prediction out;
  out.labels.resize(x.rows());
  out.scores = Matrix(x.rows(), kNumLabels);
  for (std::size_t i = 0; i < x.rows(); ++i) {
    auto logp = out.scores.row(i);
    for (std::size_t c = 0; c < kNumLabels; ++c) {
      if (!s.present[c]) {
        logp[c] = -std::numeric_limits<double>::infinity();
        continue;
      }
      double acc = s.log_prior[c];
      for (std::size_t j = 0; j < x.cols(); ++j) acc += x(i, j) > binarize ? s.log_p(c, j) : s.log_q(c, j);
      logp[c] = acc;
    }
    out.labels[i] = normalize(logp, s.present);
  }
  return out;
}

}  // namespace sentrel::models
