// Command line driver: stats | train | predict | eval | baseline | grid | features | fixture.

#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "sentrel/config.hpp"
#include "sentrel/error.hpp"
#include "sentrel/eval.hpp"
#include "sentrel/fixture.hpp"
#include "sentrel/models.hpp"
#include "sentrel/pipeline.hpp"
#include "sentrel/stats.hpp"
#include "sentrel/text.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace sentrel;

namespace {

void write_file(const fs::path& path, const std::string& body) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << body;
}

fs::path or_default(const std::string& given, const fs::path& fallback) {
  return given.empty() ? fallback : fs::path(given);
}

const std::vector<std::string>& split_ids(const RunConfig& cfg, const std::string& split) {
  if (split == "train") return cfg.train_ids;
  if (split == "test") return cfg.test_ids;
  throw Error("split must be 'train' or 'test'");
}

json provenance(const RunConfig& cfg, std::uint64_t manifest) {
  return json{{"config_hash", cfg.hash_hex()},
              {"manifest", text::hex64(manifest)},
              {"seed", cfg.seed},
              {"config", cfg.to_json()}};
}

std::string predictions_tsv(const std::vector<PairKey>& keys, const std::vector<Label>& labels,
                            std::uint64_t manifest, const RunConfig& cfg) {
  std::ostringstream out;
  out << "# manifest=" << text::hex64(manifest) << " config=" << cfg.hash_hex() << " seed=" << cfg.seed << "\n";
  for (std::size_t i = 0; i < keys.size(); ++i) {
    out << keys[i].doc_id << '\t' << keys[i].source.key() << '\t' << keys[i].target.key() << '\t'
        << to_string(labels[i]) << '\n';
  }
  return out.str();
}

struct PredictionsFile {
  std::optional<std::uint64_t> manifest;
  std::vector<LabeledPair> rows;
};

PredictionsFile read_predictions(const fs::path& path) {
  PredictionsFile out;
  const auto lines = text::read_lines(path);
  for (std::size_t ln = 0; ln < lines.size(); ++ln) {
    const auto& line = lines[ln];
    if (line.empty()) continue;
    if (line.front() == '#') {
      const auto pos = line.find("manifest=");
      if (pos != std::string::npos) out.manifest = std::stoull(line.substr(pos + 9, 16), nullptr, 16);
      continue;
    }
    const auto f = text::split(line, '\t');
    if (f.size() != 4) throw ParseError(path.string(), ln + 1, "expected 4 tab-separated fields");
    const auto label = parse_label(f[3]);
    if (!label) throw ParseError(path.string(), ln + 1, "bad label '" + std::string(f[3]) + "'");
    out.rows.push_back({{std::string(f[0]), GroupId(std::string(f[1])), GroupId(std::string(f[2]))}, *label});
  }
  return out;
}

std::vector<LabeledPair> zip(const std::vector<PairKey>& keys, const std::vector<Label>& labels) {
  std::vector<LabeledPair> out;
  out.reserve(keys.size());
  for (std::size_t i = 0; i < keys.size(); ++i) out.push_back({keys[i], labels[i]});
  return out;
}

json report_document(const std::string& name, const eval::EvalReport& r, const RunConfig& cfg,
                     std::uint64_t manifest) {
  return json{{"name", name}, {"report", eval::to_json(r)}, {"provenance", provenance(cfg, manifest)}};
}

int run_stats(const RunConfig& cfg) {
  const auto ws = Workspace::open(cfg);
  std::vector<std::pair<std::string, corpus::StatsReport>> columns;
  json out;
  for (const char* split : {"train", "test"}) {
    const auto& ids = split_ids(cfg, split);
    if (ids.empty()) continue;
    const auto docs = corpus::load_collection(cfg.corpus_dir, ids, ws.groups);
    const auto s = corpus::collection_stats(docs, cfg.pairing);
    columns.emplace_back(split, s);
    out[split] = corpus::to_json(s);
  }
  out["provenance"] = provenance(cfg, features::describe_manifest(cfg.features).hash());
  write_file(cfg.output_dir / "stats.json", out.dump(2) + "\n");
  std::cout << corpus::render_stats(columns);
  return 0;
}

int run_train(const RunConfig& cfg, const std::string& out_path) {
  const auto ws = Workspace::open(cfg);
  const auto train = prepare_split(ws, cfg.train_ids);
  const auto model = models::train(cfg.classifier, train.data.x, train.data.y, cfg.hyperparams, cfg.seed,
                                   train.data.manifest_id);
  const auto path = or_default(out_path, cfg.output_dir / "model.json");
  write_file(path, models::serialize(model));
  std::cout << "trained " << models::to_string(cfg.classifier) << " on " << train.data.x.rows()
            << " instances -> " << path.string() << "\n";
  return 0;
}

int run_predict(const RunConfig& cfg, const std::string& model_path, const std::string& split,
                const std::string& out_path) {
  const auto ws = Workspace::open(cfg);
  const auto manifest = features::describe_manifest(cfg.features).hash();
  const auto model = models::load(or_default(model_path, cfg.output_dir / "model.json"), manifest);
  const auto data = prepare_split(ws, split_ids(cfg, split));
  const auto pred = models::predict(model, data.data.x, data.data.manifest_id);
  const auto path = or_default(out_path, cfg.output_dir / "predictions.tsv");
  write_file(path, predictions_tsv(data.data.keys, pred.labels, manifest, cfg));
  std::cout << "wrote " << pred.labels.size() << " predictions -> " << path.string() << "\n";
  return 0;
}

int run_eval(const RunConfig& cfg, const std::string& predictions_path, const std::string& split,
             const std::string& format, const std::string& out_path) {
  const auto fmt = eval::parse_format(format);
  if (!fmt) throw Error("format must be 'json' or 'table'");
  const auto ws = Workspace::open(cfg);
  const auto manifest = features::describe_manifest(cfg.features).hash();
  const auto preds = read_predictions(or_default(predictions_path, cfg.output_dir / "predictions.tsv"));
  if (preds.manifest && *preds.manifest != manifest) {
    throw ManifestError("predictions were made with feature manifest " + text::hex64(*preds.manifest) +
                        ", current manifest is " + text::hex64(manifest));
  }
  const auto data = prepare_split(ws, split_ids(cfg, split));
  const auto gold = data.gold();
  const auto report = eval::evaluate(preds.rows, gold, data.data.keys, cfg.aggregation);
  const auto path = or_default(out_path, cfg.output_dir / "report.json");
  write_file(path, report_document(std::string(models::to_string(cfg.classifier)), report, cfg, manifest).dump(2) +
                       "\n");
  std::cout << eval::render_report(report, *fmt, std::string(models::to_string(cfg.classifier)));
  return 0;
}

int run_baseline(const RunConfig& cfg, const std::string& kind_name, int seeds) {
  const auto kind = models::parse_baseline(kind_name);
  if (!kind) throw Error("baseline kind must be neg, pos, random or distr");
  if (seeds < 1) throw Error("--seeds must be at least 1");
  const auto ws = Workspace::open(cfg);
  const auto manifest = features::describe_manifest(cfg.features).hash();
  std::optional<models::LabelDistribution> dist;
  if (*kind == models::BaselineKind::distr) {
    // Pair labels only; features are not needed for the training distribution.
    const auto docs = corpus::load_collection(cfg.corpus_dir, cfg.train_ids, ws.groups);
    std::vector<Label> labels;
    for (const auto& d : pairing::build_all(docs, cfg.pairing)) {
      for (const auto& i : d.instances) labels.push_back(i.label);
    }
    dist = models::LabelDistribution::from_labels(labels);
  }
  const auto docs = corpus::load_collection(cfg.corpus_dir, cfg.test_ids, ws.groups);
  const auto inst = pairing::build_all(docs, cfg.pairing);
  std::vector<PairKey> keys;
  std::vector<LabeledPair> gold;
  for (const auto& d : inst) {
    for (const auto& i : d.instances) keys.push_back(i.key());
    gold.insert(gold.end(), d.gold.begin(), d.gold.end());
  }

  eval::EvalReport mean;
  json runs = json::array();
  for (int s = 0; s < seeds; ++s) {
    const auto labels = models::baseline_predict(*kind, keys.size(), dist, cfg.seed + s, cfg.distr_mode);
    const auto r = eval::evaluate(zip(keys, labels), gold, keys, cfg.aggregation);
    runs.push_back(eval::to_json(r));
    mean.macro_precision += r.macro_precision / seeds;
    mean.macro_recall += r.macro_recall / seeds;
    mean.f1 += r.f1 / seeds;
    if (s == 0) {
      write_file(cfg.output_dir / ("baseline_" + kind_name + "_predictions.tsv"),
                 predictions_tsv(keys, labels, manifest, cfg));
    }
  }
  const std::string name = "Baseline_" + kind_name;
  json doc{{"name", name}, {"runs", runs}, {"provenance", provenance(cfg, manifest)}};
  if (seeds > 1) {
    doc["mean"] = {{"precision", mean.macro_precision}, {"recall", mean.macro_recall}, {"f1", mean.f1}};
  }
  if (dist) doc["train_distribution"] = dist->p;
  write_file(cfg.output_dir / ("baseline_" + kind_name + ".json"), doc.dump(2) + "\n");
  eval::EvalReport shown = seeds > 1 ? mean : eval::report_from_json(runs.front());
  std::cout << eval::render_table({{name, shown}});
  return 0;
}

int run_grid(const RunConfig& cfg) {
  const auto ws = Workspace::open(cfg);
  const auto train = prepare_split(ws, cfg.train_ids);
  const auto grid = cfg.grid.empty() ? default_grid(cfg.classifier) : cfg.grid;
  const auto result = models::grid_search(cfg.classifier, grid, train.data.x, train.data.y, cfg.folds, cfg.seed,
                                          train.data.manifest_id, cfg.hyperparams);
  json points = json::array();
  for (const auto& p : result.points) {
    points.push_back(json{{"params", p.params}, {"fold_scores", p.fold_scores}, {"mean_score", p.mean_score}});
  }
  json doc{{"best", result.best}, {"points", points}, {"provenance", provenance(cfg, train.data.manifest_id)}};
  write_file(cfg.output_dir / "model_grid.json", models::serialize(result.model));

  const std::string name = std::string(models::to_string(cfg.classifier)) + " (grid search)";
  if (!cfg.test_ids.empty()) {
    const auto test = prepare_split(ws, cfg.test_ids);
    const auto pred = models::predict(result.model, test.data.x, test.data.manifest_id);
    write_file(cfg.output_dir / "predictions_grid.tsv",
               predictions_tsv(test.data.keys, pred.labels, test.data.manifest_id, cfg));
    const auto report = eval::evaluate(zip(test.data.keys, pred.labels), test.gold(), test.data.keys,
                                       cfg.aggregation);
    doc["report"] = eval::to_json(report);
    std::cout << eval::render_table({{name, report}});
  }
  write_file(cfg.output_dir / "grid.json", doc.dump(2) + "\n");
  std::cout << "best: " << json(result.best).dump() << "\n";
  return 0;
}

int run_features(const RunConfig& cfg, const std::string& split, const std::string& out_path) {
  const auto ws = Workspace::open(cfg);
  const auto data = prepare_split(ws, split_ids(cfg, split));
  const auto manifest = features::describe_manifest(cfg.features);

  std::ostringstream tsv;
  tsv << "doc_id\tsource_group\ttarget_group\tlabel";
  for (const auto& n : manifest.names()) tsv << '\t' << n;
  tsv << '\n';
  char buf[64];
  for (std::size_t i = 0; i < data.data.x.rows(); ++i) {
    const auto& k = data.data.keys[i];
    tsv << k.doc_id << '\t' << k.source.key() << '\t' << k.target.key() << '\t' << to_string(data.data.y[i]);
    for (double v : data.data.x.row(i)) {
      std::snprintf(buf, sizeof buf, "\t%.17g", v);
      tsv << buf;
    }
    tsv << '\n';
  }
  const auto path = or_default(out_path, cfg.output_dir / ("features_" + split + ".tsv"));
  write_file(path, tsv.str());

  std::ostringstream audit;
  audit << "doc_id\tsource_group\ttarget_group\tlabel\tn_contexts\n";
  for (const auto& d : data.instances) {
    for (const auto& i : d.instances) {
      audit << i.doc_id << '\t' << i.source.key() << '\t' << i.target.key() << '\t' << to_string(i.label) << '\t'
            << i.contexts.size() << '\n';
    }
  }
  write_file(cfg.output_dir / ("instances_" + split + ".tsv"), audit.str());

  json spec = json::array();
  for (const auto& s : manifest.specs()) {
    spec.push_back({{"name", s.name}, {"group", std::string(features::to_string(s.group))}, {"description", s.description}});
  }
  write_file(cfg.output_dir / "manifest.json",
             json{{"hash", manifest.hash_hex()}, {"features", spec}}.dump(2) + "\n");
  std::cout << "wrote " << data.data.x.rows() << " x " << manifest.size() << " features -> " << path.string()
            << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Document-level sentiment relation extraction between named entities"};
  app.require_subcommand(1);

  std::string config_path;
  std::string model_path, predictions_path, out_path, split = "test", format = "table", baseline_kind;
  int seeds = 1;
  fixture::FixtureSpec fx;
  std::string fixture_out;

  const auto with_config = [&](CLI::App* sub) {
    sub->add_option("-c,--config", config_path, "run configuration (JSON)")->required();
  };
  auto* stats = app.add_subcommand("stats", "collection statistics for both splits");
  with_config(stats);
  auto* train = app.add_subcommand("train", "train the configured classifier on the train split");
  with_config(train);
  train->add_option("-o,--out", out_path, "model file (default <output_dir>/model.json)");
  auto* predict = app.add_subcommand("predict", "label the pair instances of a split");
  with_config(predict);
  predict->add_option("-m,--model", model_path, "model file");
  predict->add_option("-s,--split", split, "train or test")->check(CLI::IsMember({"train", "test"}));
  predict->add_option("-o,--out", out_path, "predictions file");
  auto* evaluate = app.add_subcommand("eval", "score a predictions file against gold");
  with_config(evaluate);
  evaluate->add_option("-p,--predictions", predictions_path, "predictions file");
  evaluate->add_option("-s,--split", split, "train or test")->check(CLI::IsMember({"train", "test"}));
  evaluate->add_option("-f,--format", format, "json or table");
  evaluate->add_option("-o,--out", out_path, "report file");
  auto* baseline = app.add_subcommand("baseline", "score a baseline labeling on the test split");
  with_config(baseline);
  baseline->add_option("-k,--kind", baseline_kind, "neg, pos, random or distr")->required();
  baseline->add_option("--seeds", seeds, "number of consecutive seeds to average (random/distr)");
  auto* grid = app.add_subcommand("grid", "grid search with stratified cross validation");
  with_config(grid);
  auto* feats = app.add_subcommand("features", "dump feature vectors of a split as TSV");
  with_config(feats);
  feats->add_option("-s,--split", split, "train or test")->check(CLI::IsMember({"train", "test"}));
  feats->add_option("-o,--out", out_path, "TSV file");
  auto* fix = app.add_subcommand("fixture", "generate a synthetic corpus with planted labels");
  fix->add_option("--seed", fx.seed, "random seed");
  fix->add_option("-n,--n-docs", fx.n_docs, "number of documents");
  fix->add_option("--min-entities", fx.min_entities, "entity groups per document, lower bound");
  fix->add_option("--max-entities", fx.max_entities, "entity groups per document, upper bound");
  fix->add_option("-o,--out", fixture_out, "output directory (must be empty)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : static_cast<int>(ExitCode::usage);
  }

  try {
    if (fix->parsed()) {
      const auto truth = fixture::generate(fx, fixture_out);
      std::cout << "fixture: " << truth.train_ids.size() + truth.test_ids.size() << " documents, "
                << truth.instances.size() << " pair instances -> " << fixture_out << "\n";
      return 0;
    }
    const auto cfg = RunConfig::load(config_path);
    if (stats->parsed()) return run_stats(cfg);
    if (train->parsed()) return run_train(cfg, out_path);
    if (predict->parsed()) return run_predict(cfg, model_path, split, out_path);
    if (evaluate->parsed()) return run_eval(cfg, predictions_path, split, format, out_path);
    if (baseline->parsed()) return run_baseline(cfg, baseline_kind, seeds);
    if (grid->parsed()) return run_grid(cfg);
    if (feats->parsed()) return run_features(cfg, split, out_path);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return static_cast<int>(e.exit_code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return static_cast<int>(ExitCode::usage);
  }
  return static_cast<int>(ExitCode::usage);
}
