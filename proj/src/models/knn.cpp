#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "sentrel/models.hpp"

namespace sentrel::models {

KnnState train_knn(const Matrix& x, std::span<const Label> y) {
  return KnnState{x, std::vector<Label>(y.begin(), y.end())};
}

namespace {

struct Neighbor {
  double dist;
  Label label;

  // Equal distances are ordered by class so the chosen set does not depend
  // on training-row order.
  bool operator<(const Neighbor& o) const {
    if (dist != o.dist) return dist < o.dist;
    return index_of(label) < index_of(o.label);
  }
};

void classify(const KnnState& state, std::size_t k, std::span<const double> q, std::vector<Neighbor>& buf,
              Label& label, std::span<double> scores) {
  const std::size_t n = state.x.rows();
  buf.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto r = state.x.row(i);
    double d2 = 0.0;
    for (std::size_t j = 0; j < q.size(); ++j) {
      const double dx = r[j] - q[j];
      d2 += dx * dx;
    }
    buf[i] = {std::sqrt(d2), state.y[i]};
  }
  const std::size_t kk = std::min(k, n);
  std::partial_sort(buf.begin(), buf.begin() + static_cast<long>(kk), buf.end());

  std::array<std::size_t, kNumLabels> votes{};
  std::array<double, kNumLabels> dist_sum{};
  for (std::size_t i = 0; i < kk; ++i) {
    ++votes[index_of(buf[i].label)];
    dist_sum[index_of(buf[i].label)] += buf[i].dist;
  }
  // Majority, then smaller summed distance, then class order.
  std::size_t best = 0;
  for (std::size_t c = 1; c < kNumLabels; ++c) {
    if (votes[c] > votes[best] || (votes[c] == votes[best] && votes[c] > 0 && dist_sum[c] < dist_sum[best])) {
      best = c;
    }
  }
  label = static_cast<Label>(best);
  for (std::size_t c = 0; c < kNumLabels; ++c) scores[c] = static_cast<double>(votes[c]) / static_cast<double>(kk);
}

}  // namespace

Prediction predict_knn(const KnnState& state, std::size_t k, const Matrix& x, Exec exec) {
  if (state.x.rows() == 0) throw std::logic_error("KNN model has no stored examples");
  Prediction out;
  out.labels.resize(x.rows());
  out.scores = Matrix(x.rows(), kNumLabels);
  const auto n = static_cast<long>(x.rows());
#pragma omp parallel if (exec == Exec::parallel)
  {
    std::vector<Neighbor> buf;
#pragma omp for schedule(static)
    for (long i = 0; i < n; ++i) {
      classify(state, k, x.row(i), buf, out.labels[i], out.scores.row(i));
    }
  }
  return out;
}

}  // namespace sentrel::models
