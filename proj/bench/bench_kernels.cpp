// Serial reference vs OpenMP paths for the hot kernels.

#include <filesystem>
#include <random>

#include <benchmark/benchmark.h>

#include "sentrel/fixture.hpp"
#include "sentrel/models.hpp"
#include "sentrel/pipeline.hpp"

namespace fs = std::filesystem;
using namespace sentrel;

namespace {

struct Data {
  Matrix x;
  std::vector<Label> y;
};

Data random_data(std::size_t n, std::size_t d, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  Data out{Matrix(n, d), std::vector<Label>(n)};
  for (std::size_t i = 0; i < n; ++i) {
    const auto c = rng() % 3;
    out.y[i] = kAllLabels[c];
    for (std::size_t j = 0; j < d; ++j) out.x(i, j) = g(rng) + (j % 3 == c ? 1.5 : 0.0);
  }
  return out;
}

struct Corpus {
  Workspace ws;
  PreparedSplit split;
};

const Corpus& fixture_corpus() {
  static const Corpus corpus = [] {
    const auto dir = fs::temp_directory_path() / "sentrel_bench_fixture";
    fs::remove_all(dir);
    fixture::generate({.seed = 1, .n_docs = 64, .min_entities = 8, .max_entities = 12}, dir);
    auto cfg = RunConfig::load(dir / "config.json");
    auto ws = Workspace::open(cfg);
    auto ids = cfg.train_ids;
    ids.insert(ids.end(), cfg.test_ids.begin(), cfg.test_ids.end());
    auto split = prepare_split(ws, ids);
    return Corpus{std::move(ws), std::move(split)};
  }();
  return corpus;
}

Exec exec_of(const benchmark::State& state) { return state.range(0) == 0 ? Exec::serial : Exec::parallel; }

void BM_ExtractAll(benchmark::State& state) {
  const auto& c = fixture_corpus();
  for (auto _ : state) {
    auto d = features::extract_all(c.split.docs, c.split.instances, c.ws.resources, {}, exec_of(state));
    benchmark::DoNotOptimize(d.x.data().data());
  }
  state.SetItemsProcessed(state.iterations() * c.split.data.x.rows());
}

void BM_PredictKnn(benchmark::State& state) {
  static const auto train = random_data(4000, 43, 1);
  static const auto query = random_data(1000, 43, 2);
  const auto st = models::train_knn(train.x, train.y);
  for (auto _ : state) {
    auto p = models::predict_knn(st, 5, query.x, exec_of(state));
    benchmark::DoNotOptimize(p.labels.data());
  }
  state.SetItemsProcessed(state.iterations() * query.x.rows());
}

void BM_TrainForest(benchmark::State& state) {
  static const auto data = random_data(2000, 43, 3);
  models::ForestOptions o;
  o.trees = 32;
  for (auto _ : state) {
    auto f = models::train_forest(data.x, data.y, o, 1, exec_of(state));
    benchmark::DoNotOptimize(f.trees.data());
  }
}

}  // namespace

BENCHMARK(BM_ExtractAll)->Arg(0)->Arg(1)->ArgName("parallel")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PredictKnn)->Arg(0)->Arg(1)->ArgName("parallel")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_TrainForest)->Arg(0)->Arg(1)->ArgName("parallel")->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
