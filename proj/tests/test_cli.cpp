#include <doctest.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sys/wait.h>

#include "sentrel/config.hpp"
#include "sentrel/corpus.hpp"
#include "sentrel/fixture.hpp"
#include "sentrel/pairing.hpp"
#include "sentrel/text.hpp"

namespace fs = std::filesystem;
using namespace sentrel;
using nlohmann::json;

namespace {

struct Run {
  int rc = -1;
  std::string output;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(SENTREL_CLI_PATH) + " " + args + " 2>&1";
  Run r;
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  std::array<char, 4096> buf{};
  while (std::fgets(buf.data(), buf.size(), p)) r.output += buf.data();
  const int status = pclose(p);
  r.rc = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

fs::path fresh(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("sentrel_cli_" + name);
  fs::remove_all(dir);
  return dir;
}

fs::path make_fixture(const std::string& name, std::size_t n_docs = 8, std::uint64_t seed = 1) {
  const auto dir = fresh(name);
  const auto r = run("fixture --seed " + std::to_string(seed) + " -n " + std::to_string(n_docs) + " -o " +
                     dir.string());
  REQUIRE(r.rc == 0);
  return dir;
}

void write_json(const fs::path& p, const json& j) { std::ofstream(p) << j.dump(2); }

json read_json(const fs::path& p) { return json::parse(text::read_file(p)); }

std::map<std::string, std::string> tree_bytes(const fs::path& dir) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    if (e.is_regular_file()) out[fs::relative(e.path(), dir).generic_string()] = text::read_file(e.path());
  }
  return out;
}

}  // namespace

TEST_CASE("usage errors exit 1") {
  CHECK(run("").rc == 1);
  CHECK(run("frobnicate").rc == 1);
  CHECK(run("train").rc == 1);
  CHECK(run("fixture -n 0 -o " + fresh("zero").string()).rc == 1);
}

TEST_CASE("fixture refuses a non-empty directory") {
  const auto dir = make_fixture("nonempty", 2);
  const auto r = run("fixture -o " + dir.string());
  CHECK(r.rc == 1);
}

TEST_CASE("fixture is byte-reproducible") {
  const auto a = make_fixture("repro_a", 4, 9);
  const auto b = make_fixture("repro_b", 4, 9);
  CHECK(tree_bytes(a) == tree_bytes(b));
  const auto c = make_fixture("repro_c", 4, 10);
  CHECK(text::read_file(a / "corpus" / "doc01.txt") != text::read_file(c / "corpus" / "doc01.txt"));
}

TEST_CASE("pairing recovers exactly the planted labels") {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const auto dir = fresh("truth_" + std::to_string(seed));
    const auto truth = fixture::generate({.seed = seed, .n_docs = 4}, dir);
    const auto cfg = RunConfig::load(dir / "config.json");
    auto ids = cfg.train_ids;
    ids.insert(ids.end(), cfg.test_ids.begin(), cfg.test_ids.end());
    const auto docs = corpus::load_collection(cfg.corpus_dir, ids, corpus::SynonymGroups::load(cfg.synonyms));
    std::vector<LabeledPair> got;
    for (const auto& d : pairing::build_all(docs)) {
      CHECK(d.non_cooccurring.empty());
      for (const auto& i : d.instances) got.push_back({i.key(), i.label});
    }
    std::sort(got.begin(), got.end(), [](const auto& a, const auto& b) { return a.key < b.key; });
    auto want = truth.instances;
    std::sort(want.begin(), want.end(), [](const auto& a, const auto& b) { return a.key < b.key; });
    CHECK(got == want);
  }
}

TEST_CASE("stats match the fixture ground truth") {
  const auto dir = make_fixture("stats");
  REQUIRE(run("stats -c " + (dir / "config.json").string()).rc == 0);
  const auto stats = read_json(dir / "out" / "stats.json");
  const auto cfg = read_json(dir / "config.json");
  std::map<std::string, std::array<double, 3>> per_doc;
  for (const auto& line : text::read_lines(dir / "truth.tsv")) {
    const auto f = text::split(line, '\t');
    REQUIRE(f.size() == 4);
    per_doc[std::string(f[0])][index_of(*parse_label(f[3]))] += 1;
  }
  for (const char* split : {"train", "test"}) {
    const auto ids = cfg.at(std::string(split) + "_ids").get<std::vector<std::string>>();
    std::array<double, 3> sum{};
    for (const auto& id : ids) {
      for (int c = 0; c < 3; ++c) sum[c] += per_doc[id][c];
    }
    const auto& s = stats.at(split);
    CHECK(s.at("documents").get<std::size_t>() == ids.size());
    CHECK(s.at("avg_pos_pairs").get<double>() == doctest::Approx(sum[0] / ids.size()));
    CHECK(s.at("avg_neg_pairs").get<double>() == doctest::Approx(sum[1] / ids.size()));
    CHECK(s.at("avg_neutral_pairs").get<double>() == doctest::Approx(sum[2] / ids.size()));
  }
  CHECK(stats.at("provenance").contains("config_hash"));
}

TEST_CASE("missing synonyms file exits 2 and names the path") {
  const auto dir = make_fixture("missing_syn", 2);
  fs::remove(dir / "synonyms.txt");
  const auto r = run("stats -c " + (dir / "config.json").string());
  CHECK(r.rc == 2);
  CHECK(r.output.find((dir / "synonyms.txt").string()) != std::string::npos);
}

TEST_CASE("bad config is a usage error") {
  const auto dir = make_fixture("badcfg", 2);
  auto cfg = read_json(dir / "config.json");
  cfg["colour"] = "blue";
  write_json(dir / "c1.json", cfg);
  CHECK(run("stats -c " + (dir / "c1.json").string()).rc == 1);
  cfg.erase("colour");
  cfg["test_ids"] = cfg["train_ids"];
  write_json(dir / "c2.json", cfg);
  const auto r = run("stats -c " + (dir / "c2.json").string());
  CHECK(r.rc == 1);
  CHECK(r.output.find("both the train and the test split") != std::string::npos);
}

TEST_CASE("manifest mismatch exits 3") {
  const auto dir = make_fixture("manifest", 4);
  REQUIRE(run("train -c " + (dir / "config.json").string()).rc == 0);
  auto cfg = read_json(dir / "config.json");
  cfg["features"] = {{"similarity", false}};
  write_json(dir / "narrow.json", cfg);
  const auto r = run("predict -c " + (dir / "narrow.json").string());
  CHECK(r.rc == 3);
  REQUIRE(run("predict -c " + (dir / "config.json").string()).rc == 0);
  CHECK(run("eval -c " + (dir / "narrow.json").string()).rc == 3);
}

TEST_CASE("conflicting gold exits 4") {
  const auto dir = make_fixture("conflict", 2);
  const auto opin = dir / "corpus" / "doc01.opin.txt";
  const auto first = text::read_lines(opin).front();
  const auto f = text::split(first, ',');
  const std::string flipped = std::string(text::trim(f[2])) == "pos" ? "neg" : "pos";
  std::ofstream(opin, std::ios::app) << f[0] << "," << f[1] << ", " << flipped << "\n";
  CHECK(run("stats -c " + (dir / "config.json").string()).rc == 4);
}

TEST_CASE("train, predict and eval are byte-reproducible") {
  const auto dir = make_fixture("e2e");
  const auto cfg = (dir / "config.json").string();
  std::map<std::string, std::string> first;
  for (int round = 0; round < 2; ++round) {
    REQUIRE(run("train -c " + cfg).rc == 0);
    REQUIRE(run("predict -c " + cfg).rc == 0);
    const auto r = run("eval -c " + cfg);
    REQUIRE(r.rc == 0);
    CHECK(r.output.find("F-measure") != std::string::npos);
    const auto bytes = tree_bytes(dir / "out");
    if (round == 0) first = bytes;
    else CHECK(bytes == first);
  }
  const auto report = read_json(dir / "out" / "report.json");
  const auto& prov = report.at("provenance");
  CHECK(prov.at("seed") == 1);
  CHECK(prov.at("manifest").get<std::string>().size() == 16);
  CHECK(prov.at("config").at("hyperparams").at("trees") == 100);
  CHECK(prov.at("config").at("aggregation") == "global");

  const auto preds = text::read_lines(dir / "out" / "predictions.tsv");
  REQUIRE(preds.size() > 1);
  CHECK(preds[0].rfind("# manifest=", 0) == 0);
  CHECK(text::split(preds[1], '\t').size() == 4);
}

TEST_CASE("baselines, grid and feature dump") {
  const auto dir = make_fixture("misc", 6);
  const auto cfg = (dir / "config.json").string();
  const auto neg = run("baseline -c " + cfg + " -k neg");
  CHECK(neg.rc == 0);
  CHECK(neg.output.find("Baseline_neg") != std::string::npos);
  const auto neg_report = read_json(dir / "out" / "baseline_neg.json");
  CHECK(neg_report.at("runs")[0].at("neg").at("precision").get<double>() > 0.0);
  CHECK(neg_report.at("runs")[0].at("pos").at("predicted") == 0);
  CHECK(run("baseline -c " + cfg + " -k distr --seeds 3").rc == 0);
  CHECK(read_json(dir / "out" / "baseline_distr.json").contains("mean"));
  CHECK(run("baseline -c " + cfg + " -k median").rc == 1);

  auto grid_cfg = read_json(dir / "config.json");
  grid_cfg["classifier"] = "knn";
  grid_cfg["grid"] = json::array({{{"name", "k"}, {"values", {1, 3}}}});
  grid_cfg["folds"] = 2;
  write_json(dir / "grid.json", grid_cfg);
  const auto g = run("grid -c " + (dir / "grid.json").string());
  CHECK(g.rc == 0);
  const auto grid = read_json(dir / "out" / "grid.json");
  CHECK(grid.at("points").size() == 2);
  CHECK(grid.contains("report"));

  REQUIRE(run("features -c " + cfg + " -s train").rc == 0);
  const auto rows = text::read_lines(dir / "out" / "features_train.tsv");
  const auto header = text::split(rows.front(), '\t');
  CHECK(header.size() == 4 + 43);
  CHECK(header[4] == "entity.similarity");
  const auto audit = text::read_lines(dir / "out" / "instances_train.tsv");
  CHECK(audit.front() == "doc_id\tsource_group\ttarget_group\tlabel\tn_contexts");
  CHECK(audit.size() == rows.size());
}
