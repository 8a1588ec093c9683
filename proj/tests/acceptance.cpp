// Acceptance suite: one PASS/FAIL/SKIP line per criterion.
//
// Criteria 7-9 need the RuSentRel corpus converted to the documented file
// layout; point SENTREL_RUSENTREL_CONFIG at a run config for it.

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <sys/wait.h>

#include "sentrel/config.hpp"
#include "sentrel/eval.hpp"
#include "sentrel/fixture.hpp"
#include "sentrel/models.hpp"
#include "sentrel/pipeline.hpp"
#include "sentrel/stats.hpp"
#include "sentrel/text.hpp"

#include "eval_oracle.hpp"

namespace fs = std::filesystem;
using namespace sentrel;

namespace {

enum class Verdict { pass, fail, skip };

struct Outcome {
  Verdict verdict = Verdict::fail;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("sentrel_acceptance_" + name);
  fs::remove_all(dir);
  return dir;
}

Outcome oracle_equivalence() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(20170901);
  std::size_t mismatches = 0;
  for (int n = 0; n < 200; ++n) {
    const auto c = testing::random_case(rng);
    const auto r = eval::evaluate(c.predictions, c.gold, c.instances);
    const auto o = testing::oracle(c);
    if (!(r.pos == o.pos && r.neg == o.neg && r.macro_precision == o.macro_precision &&
          r.macro_recall == o.macro_recall && r.f1 == o.f1)) {
      ++mismatches;
    }
  }
  const double s = seconds_since(t0);
  const bool ok = mismatches == 0 && s < 5.0;
  return {ok ? Verdict::pass : Verdict::fail,
          std::to_string(mismatches) + " mismatches in 200 cases, " + fmt("%.3f s", s)};
}

Outcome metric_shape() {
  const double table3 = eval::f_from_macro(0.44, 0.19);
  const double table2 = eval::f_from_macro(0.027, 0.390);
  const bool ok3 = std::round(table3 * 100) / 100 == 0.27;
  const bool ok2 = std::round(table2 * 1000) / 1000 == 0.050;
  std::string d = "f(0.44, 0.19) = " + fmt("%.6f", table3) + (ok3 ? " -> 0.27 ok" : " -> not 0.27") +
                  "; f(0.027, 0.390) = " + fmt("%.7f", table2) + " -> " + fmt("%.3f", table2) +
                  (ok2 ? " ok" : ", expected 0.050");
  return {ok3 && ok2 ? Verdict::pass : Verdict::fail, d};
}

Outcome classifier_oracles() {
  std::vector<std::string> notes;
  bool ok = true;

  // Gaussian NB against closed-form densities.
  const auto x = Matrix::from_rows({{0.0}, {2.0}, {10.0}, {12.0}});
  const std::vector<Label> y{Label::pos, Label::pos, Label::neg, Label::neg};
  const auto nb = models::train_gaussian_nb(x, y, 1e-9);
  const double var = 1.0 + 1e-9 * 26.0;
  double worst = 0.0;
  for (double q : {2.0, 5.0, 6.0, 6.5, 11.0}) {
    const double la = std::exp(-(q - 1) * (q - 1) / (2 * var)), lb = std::exp(-(q - 11) * (q - 11) / (2 * var));
    const auto p = models::predict_gaussian_nb(nb, Matrix::from_rows({{q}}));
    worst = std::max(worst, std::abs(p.scores(0, 0) - la / (la + lb)));
  }
  ok &= worst <= 1e-9;
  notes.push_back("gnb max error " + fmt("%.2e", worst));

  // One unbootstrapped tree fits conflict-free data.
  std::mt19937_64 rng(3);
  std::vector<std::vector<double>> rows;
  std::vector<Label> labels;
  std::set<std::vector<double>> seen;
  while (rows.size() < 200) {
    std::vector<double> r{double(rng() % 8), double(rng() % 8), double(rng() % 8), double(rng() % 8), double(rng() % 8)};
    if (!seen.insert(r).second) continue;
    rows.push_back(r);
    labels.push_back(kAllLabels[rng() % 3]);
  }
  models::ForestOptions fo;
  fo.trees = 1;
  fo.bootstrap = false;
  const auto fx = Matrix::from_rows(rows);
  const auto forest = models::train_forest(fx, labels, fo, 1, Exec::serial);
  const bool fits = models::predict_forest(forest, fx, Exec::serial).labels == labels;
  ok &= fits;
  notes.push_back(std::string("forest T=1 ") + (fits ? "fits" : "does not fit"));

  // Linear SVM on separable blobs.
  std::uniform_real_distribution<double> u(-1, 1);
  const double centers[3][2] = {{-5, 0}, {5, 0}, {0, 7}};
  std::vector<std::vector<double>> b;
  std::vector<Label> by;
  for (int c = 0; c < 3; ++c) {
    for (int i = 0; i < 40; ++i) {
      b.push_back({centers[c][0] + u(rng), centers[c][1] + u(rng)});
      by.push_back(kAllLabels[c]);
    }
  }
  const auto bx = Matrix::from_rows(b);
  const auto svm = models::train(models::Kind::linear_svm, bx, by, {}, 1);
  const auto pred = models::predict(svm, bx).labels;
  std::size_t correct = 0;
  for (std::size_t i = 0; i < by.size(); ++i) correct += pred[i] == by[i];
  const double acc = double(correct) / by.size();
  ok &= acc == 1.0;
  notes.push_back("svm accuracy " + fmt("%.3f", acc));

  std::string d;
  for (const auto& n : notes) d += (d.empty() ? "" : "; ") + n;
  return {ok ? Verdict::pass : Verdict::fail, d};
}

struct FixtureRun {
  eval::EvalReport report;
  double seconds = 0;
};

FixtureRun run_fixture_forest(const fs::path& dir) {
  const auto t0 = Clock::now();
  const auto cfg = RunConfig::load(dir / "config.json");
  const auto ws = Workspace::open(cfg);
  const auto train = prepare_split(ws, cfg.train_ids);
  const auto test = prepare_split(ws, cfg.test_ids);
  const auto model = models::train(models::Kind::random_forest, train.data.x, train.data.y, {}, cfg.seed,
                                   train.data.manifest_id);
  const auto pred = models::predict(model, test.data.x, test.data.manifest_id);
  std::vector<LabeledPair> rows;
  for (std::size_t i = 0; i < pred.labels.size(); ++i) rows.push_back({test.data.keys[i], pred.labels[i]});
  FixtureRun r;
  r.report = eval::evaluate(rows, test.gold(), test.data.keys);
  r.seconds = seconds_since(t0);
  return r;
}

Outcome planted_signal() {
  const auto dir = scratch("planted");
  fixture::generate({.seed = 1, .n_docs = 8}, dir);
  const auto r = run_fixture_forest(dir);
  const bool ok = r.report.f1 >= 0.95 && r.seconds < 30.0;
  return {ok ? Verdict::pass : Verdict::fail,
          "F = " + fmt("%.3f", r.report.f1) + " (P " + fmt("%.3f", r.report.macro_precision) + ", R " +
              fmt("%.3f", r.report.macro_recall) + "), " + fmt("%.2f s", r.seconds)};
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(SENTREL_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

Outcome determinism() {
  const auto dir = scratch("determinism");
  fixture::generate({.seed = 1, .n_docs = 8}, dir);
  const std::string cfg = (dir / "config.json").string();
  std::array<std::map<std::string, std::string>, 2> outputs;
  for (auto& out : outputs) {
    fs::remove_all(dir / "out");
    for (const char* cmd : {"train", "predict", "eval"}) {
      if (run_cli(std::string(cmd) + " -c " + cfg) != 0) {
        return {Verdict::fail, std::string("sentrel ") + cmd + " failed"};
      }
    }
    for (const char* f : {"model.json", "predictions.tsv", "report.json"}) out[f] = text::read_file(dir / "out" / f);
  }
  const bool ok = outputs[0] == outputs[1];
  return {ok ? Verdict::pass : Verdict::fail,
          ok ? "model, predictions and report identical across two runs" : "outputs differ between runs"};
}

Outcome feature_invariants() {
  const auto dir = scratch("invariants");
  fixture::generate({.seed = 1, .n_docs = 8}, dir);
  const auto cfg = RunConfig::load(dir / "config.json");
  const auto ws = Workspace::open(cfg);
  auto ids = cfg.train_ids;
  ids.insert(ids.end(), cfg.test_ids.begin(), cfg.test_ids.end());
  const auto split = prepare_split(ws, ids);
  const auto& data = split.data;
  const auto names = features::describe_manifest(cfg.features).names();
  std::map<std::string, std::size_t> col;
  for (std::size_t j = 0; j < names.size(); ++j) col[names[j]] = j;

  std::size_t order_violations = 0, checked_cells = 0;
  for (std::size_t i = 0; i < data.x.rows(); ++i) {
    for (const auto& n : names) {
      if (n.rfind("context.min.", 0) != 0) continue;
      const auto base = n.substr(12);
      const double mn = data.x(i, col[n]), av = data.x(i, col["context.avg." + base]),
                   mx = data.x(i, col["context.max." + base]);
      ++checked_cells;
      if (!(mn <= av && av <= mx)) ++order_violations;
    }
  }

  std::map<PairKey, std::size_t> row_of;
  for (std::size_t i = 0; i < data.keys.size(); ++i) row_of[data.keys[i]] = i;
  std::size_t pairs = 0, anti_violations = 0;
  for (const auto& [k, i] : row_of) {
    const auto it = row_of.find(PairKey{k.doc_id, k.target, k.source});
    if (it == row_of.end()) {
      ++anti_violations;
      continue;
    }
    const auto r = it->second;
    ++pairs;
    bool ok = data.x(i, col["entity.similarity"]) == data.x(r, col["entity.similarity"]);
    for (const char* f : {"type_PER", "type_ORG", "type_LOC", "type_GEO", "is_country", "is_capital"}) {
      ok &= data.x(i, col[std::string("entity.source_") + f]) == data.x(r, col[std::string("entity.target_") + f]);
    }
    ok &= data.x(i, col["entity.order"]) + data.x(r, col["entity.order"]) == 1.0;
    if (!ok) ++anti_violations;
  }
  const bool ok = order_violations == 0 && anti_violations == 0 && pairs > 0;
  return {ok ? Verdict::pass : Verdict::fail,
          std::to_string(order_violations) + "/" + std::to_string(checked_cells) + " min/avg/max violations, " +
              std::to_string(anti_violations) + "/" + std::to_string(pairs) + " antisymmetry violations"};
}

// Corpus-dependent criteria.

std::optional<RunConfig> corpus_config() {
  const char* env = std::getenv("SENTREL_RUSENTREL_CONFIG");
  if (!env || !*env || !fs::exists(env)) return std::nullopt;
  return RunConfig::load(env);
}

const char* kNoCorpus = "RuSentRel corpus not present (set SENTREL_RUSENTREL_CONFIG)";

bool within(double value, double target, double tol) { return std::abs(value - target) <= tol + 1e-12; }

Outcome corpus_statistics(const std::optional<RunConfig>& cfg) {
  if (!cfg) return {Verdict::skip, kNoCorpus};
  const auto ws = Workspace::open(*cfg);
  bool ok = cfg->train_ids.size() == 44 && cfg->test_ids.size() == 29;
  std::string d = std::to_string(cfg->train_ids.size()) + "/" + std::to_string(cfg->test_ids.size()) + " docs";
  const std::array<std::array<double, 3>, 2> paper{{{6.23, 9.33, 120}, {14.7, 15.6, 276}}};
  const std::array<const std::vector<std::string>*, 2> splits{&cfg->train_ids, &cfg->test_ids};
  for (int s = 0; s < 2; ++s) {
    const auto docs = corpus::load_collection(cfg->corpus_dir, *splits[s], ws.groups);
    const auto st = corpus::collection_stats(docs, cfg->pairing);
    const std::array<double, 3> got{st.avg_pos_pairs, st.avg_neg_pairs, st.avg_neutral_pairs};
    for (int c = 0; c < 3; ++c) ok &= within(got[c], paper[s][c], 0.10 * paper[s][c]);
    d += "; " + std::string(s == 0 ? "train" : "test") + " pos/neg/neu " + fmt("%.2f", got[0]) + "/" +
         fmt("%.2f", got[1]) + "/" + fmt("%.1f", got[2]);
  }
  return {ok ? Verdict::pass : Verdict::fail, d};
}

Outcome baselines(const std::optional<RunConfig>& cfg) {
  if (!cfg) return {Verdict::skip, kNoCorpus};
  const auto ws = Workspace::open(*cfg);
  const auto train_docs = corpus::load_collection(cfg->corpus_dir, cfg->train_ids, ws.groups);
  std::vector<Label> train_labels;
  for (const auto& d : pairing::build_all(train_docs, cfg->pairing)) {
    for (const auto& i : d.instances) train_labels.push_back(i.label);
  }
  const auto dist = models::LabelDistribution::from_labels(train_labels);
  const auto docs = corpus::load_collection(cfg->corpus_dir, cfg->test_ids, ws.groups);
  std::vector<PairKey> keys;
  std::vector<LabeledPair> gold;
  for (const auto& d : pairing::build_all(docs, cfg->pairing)) {
    for (const auto& i : d.instances) keys.push_back(i.key());
    gold.insert(gold.end(), d.gold.begin(), d.gold.end());
  }
  struct Row {
    models::BaselineKind kind;
    std::array<double, 3> paper;
    double tol;
    int seeds;
  };
  const std::vector<std::pair<std::string, Row>> rows{
      {"neg", {models::BaselineKind::neg, {0.027, 0.390, 0.050}, 0.01, 1}},
      {"pos", {models::BaselineKind::pos, {0.021, 0.400, 0.040}, 0.01, 1}},
      {"random", {models::BaselineKind::random, {0.039, 0.215, 0.065}, 0.02, 10}},
      {"distr", {models::BaselineKind::distr, {0.045, 0.230, 0.075}, 0.02, 10}}};
  bool ok = true;
  std::string d;
  for (const auto& [name, row] : rows) {
    std::array<double, 3> mean{};
    for (int s = 0; s < row.seeds; ++s) {
      const auto labels = models::baseline_predict(row.kind, keys.size(), dist, cfg->seed + s, cfg->distr_mode);
      std::vector<LabeledPair> preds;
      for (std::size_t i = 0; i < keys.size(); ++i) preds.push_back({keys[i], labels[i]});
      const auto r = eval::evaluate(preds, gold, keys, cfg->aggregation);
      mean[0] += r.macro_precision / row.seeds;
      mean[1] += r.macro_recall / row.seeds;
      mean[2] += r.f1 / row.seeds;
    }
    for (int k = 0; k < 3; ++k) ok &= within(mean[k], row.paper[k], row.tol);
    d += (d.empty() ? "" : "; ") + name + " " + fmt("%.3f", mean[0]) + "/" + fmt("%.3f", mean[1]) + "/" +
         fmt("%.3f", mean[2]);
  }
  return {ok ? Verdict::pass : Verdict::fail, d};
}

Outcome forest_floor(const std::optional<RunConfig>& cfg) {
  if (!cfg) return {Verdict::skip, kNoCorpus};
  const auto t0 = Clock::now();
  const auto ws = Workspace::open(*cfg);
  const auto train = prepare_split(ws, cfg->train_ids);
  const auto test = prepare_split(ws, cfg->test_ids);
  const auto model = models::train(models::Kind::random_forest, train.data.x, train.data.y, {}, cfg->seed,
                                   train.data.manifest_id);
  const auto pred = models::predict(model, test.data.x, test.data.manifest_id);
  std::vector<LabeledPair> rows;
  for (std::size_t i = 0; i < pred.labels.size(); ++i) rows.push_back({test.data.keys[i], pred.labels[i]});
  const auto r = eval::evaluate(rows, test.gold(), test.data.keys, cfg->aggregation);
  const double s = seconds_since(t0);
  const bool ok = r.f1 >= 0.20 && s < 600.0;
  return {ok ? Verdict::pass : Verdict::fail,
          "F = " + fmt("%.3f", r.f1) + " (P " + fmt("%.3f", r.macro_precision) + ", R " + fmt("%.3f", r.macro_recall) +
              "), " + fmt("%.1f s", s)};
}

}  // namespace

int main() {
  std::optional<RunConfig> corpus;
  std::string corpus_error;
  try {
    corpus = corpus_config();
  } catch (const std::exception& e) {
    corpus_error = e.what();
  }

  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"metric oracle equivalence", oracle_equivalence},
      {"metric shape on published rows", metric_shape},
      {"classifier oracles", classifier_oracles},
      {"planted-signal pipeline", planted_signal},
      {"end-to-end determinism", determinism},
      {"feature invariants", feature_invariants},
      {"corpus statistics reproduction", [&] { return corpus_statistics(corpus); }},
      {"baseline reproduction", [&] { return baselines(corpus); }},
      {"random forest floor on the corpus", [&] { return forest_floor(corpus); }},
  };

  // 2*0.027*0.390/0.417 = 0.0505036 rounds to 0.051, so criterion 2 cannot
  // hold as stated. It is reported as FAIL but does not fail the run.
  const std::set<int> known_unattainable{2};

  int unexpected = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    Outcome o;
    if (id >= 7 && !corpus_error.empty()) {
      o = {Verdict::fail, "corpus config: " + corpus_error};
    } else {
      try {
        o = criteria[i].second();
      } catch (const std::exception& e) {
        o = {Verdict::fail, std::string("exception: ") + e.what()};
      }
    }
    const char* tag = o.verdict == Verdict::pass ? "PASS" : o.verdict == Verdict::skip ? "SKIP" : "FAIL";
    std::string note;
    if (o.verdict == Verdict::fail) {
      if (known_unattainable.count(id)) note = " [known: inputs inconsistent with stated rounding]";
      else ++unexpected;
    }
    std::printf("%s %d %s: %s%s\n", tag, id, criteria[i].first.c_str(), o.detail.c_str(), note.c_str());
  }
  return unexpected == 0 ? 0 : 1;
}
