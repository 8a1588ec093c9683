#include <random>
#include <stdexcept>

#include "sentrel/error.hpp"
#include "sentrel/models.hpp"

namespace sentrel::models {

std::string_view to_string(BaselineKind kind) {
  switch (kind) {
    case BaselineKind::neg: return "neg";
    case BaselineKind::pos: return "pos";
    case BaselineKind::random: return "random";
    case BaselineKind::distr: return "distr";
  }
  return "?";
}

std::optional<BaselineKind> parse_baseline(std::string_view name) {
  for (auto k : {BaselineKind::neg, BaselineKind::pos, BaselineKind::random, BaselineKind::distr}) {
    if (to_string(k) == name) return k;
  }
  return std::nullopt;
}

std::vector<Label> baseline_predict(BaselineKind kind, std::size_t n, const std::optional<LabelDistribution>& train_dist,
                                    std::uint64_t seed, DistrMode mode) {
  switch (kind) {
    case BaselineKind::neg: return std::vector<Label>(n, Label::neg);
    case BaselineKind::pos: return std::vector<Label>(n, Label::pos);
    case BaselineKind::random: {
      std::mt19937_64 rng(seed);
      std::uniform_int_distribution<int> pick(0, static_cast<int>(kNumLabels) - 1);
      std::vector<Label> out(n);
      for (auto& l : out) l = static_cast<Label>(pick(rng));
      return out;
    }
    case BaselineKind::distr: {
      if (!train_dist) throw Error("the distr baseline needs the training label distribution");
      auto p = train_dist->p;
      if (mode == DistrMode::polar_only) p[index_of(Label::neu)] = 0.0;
      if (p[0] + p[1] + p[2] <= 0) throw Error("training distribution has no mass on the sampled classes");
      std::mt19937_64 rng(seed);
      std::discrete_distribution<int> pick(p.begin(), p.end());
      std::vector<Label> out(n);
      for (auto& l : out) l = static_cast<Label>(pick(rng));
      return out;
    }
  }
  throw std::logic_error("unhandled baseline kind");
}

}  // namespace sentrel::models
