#include "sentrel/eval.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>

#include "sentrel/error.hpp"

namespace sentrel::eval {

std::string_view to_string(Aggregation a) { return a == Aggregation::global ? "global" : "per-document"; }

std::optional<Aggregation> parse_aggregation(std::string_view name) {
  if (name == "global") return Aggregation::global;
  if (name == "per-document") return Aggregation::per_document;
  return std::nullopt;
}

double f_from_macro(double p, double r) { return p + r > 0 ? 2.0 * p * r / (p + r) : 0.0; }

namespace {

double ratio(std::size_t num, std::size_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

void finish(EvalReport& r) {
  for (ClassScores* c : {&r.pos, &r.neg}) {
    c->precision = ratio(c->correct, c->predicted);
    c->recall = ratio(c->correct, c->gold);
  }
  r.macro_precision = (r.pos.precision + r.neg.precision) / 2.0;
  r.macro_recall = (r.pos.recall + r.neg.recall) / 2.0;
  r.f1 = f_from_macro(r.macro_precision, r.macro_recall);
}

ClassScores& slot(EvalReport& r, Label l) { return l == Label::pos ? r.pos : r.neg; }

EvalReport evaluate_global(std::span<const LabeledPair> predictions, std::span<const LabeledPair> gold,
                           const std::set<PairKey>& known) {
  EvalReport r;
  std::map<PairKey, Label> gold_of;
  for (const auto& g : gold) {
    if (g.label == Label::neu) continue;
    const auto [it, inserted] = gold_of.emplace(g.key, g.label);
    if (!inserted && it->second != g.label) {
      throw ConflictError("gold pair (" + g.key.doc_id + ", " + g.key.source.key() + ", " + g.key.target.key() +
                          ") has both labels");
    }
    if (!inserted) continue;
    auto& s = slot(r, g.label);
    ++s.gold;
    if (!known.count(g.key)) ++s.gold_non_cooccurring;
  }
  for (const auto& p : predictions) {
    if (p.label == Label::neu) continue;
    auto& s = slot(r, p.label);
    ++s.predicted;
    const auto it = gold_of.find(p.key);
    if (it != gold_of.end() && it->second == p.label) ++s.correct;
  }
  r.instances = known.size();
  finish(r);
  return r;
}

}  // namespace

EvalReport evaluate(std::span<const LabeledPair> predictions, std::span<const LabeledPair> gold,
                    std::span<const PairKey> instances, Aggregation aggregation) {
  const std::set<PairKey> known(instances.begin(), instances.end());
  std::set<PairKey> seen;
  for (const auto& p : predictions) {
    if (!known.count(p.key)) {
      throw Error("prediction for unknown instance (" + p.key.doc_id + ", " + p.key.source.key() + ", " +
                  p.key.target.key() + ")");
    }
    if (!seen.insert(p.key).second) {
      throw Error("duplicate prediction for (" + p.key.doc_id + ", " + p.key.source.key() + ", " +
                  p.key.target.key() + ")");
    }
  }

  std::set<std::string> docs;
  for (const auto& k : instances) docs.insert(k.doc_id);
  for (const auto& g : gold) docs.insert(g.key.doc_id);

  if (aggregation == Aggregation::global) {
    EvalReport r = evaluate_global(predictions, gold, known);
    r.documents = docs.size();
    return r;
  }

  // Per-document: average the per-class precision and recall over documents.
  std::map<std::string, std::vector<LabeledPair>> preds_by_doc;
  std::map<std::string, std::vector<LabeledPair>> gold_by_doc;
  std::map<std::string, std::set<PairKey>> known_by_doc;
  for (const auto& p : predictions) preds_by_doc[p.key.doc_id].push_back(p);
  for (const auto& g : gold) gold_by_doc[g.key.doc_id].push_back(g);
  for (const auto& k : instances) known_by_doc[k.doc_id].insert(k);

  EvalReport out;
  out.aggregation = Aggregation::per_document;
  out.documents = docs.size();
  if (docs.empty()) return out;
  double pp = 0, pr = 0, np = 0, nr = 0;
  for (const auto& d : docs) {
    const EvalReport r = evaluate_global(preds_by_doc[d], gold_by_doc[d], known_by_doc[d]);
    pp += r.pos.precision;
    pr += r.pos.recall;
    np += r.neg.precision;
    nr += r.neg.recall;
    for (auto [dst, src] : {std::pair{&out.pos, &r.pos}, std::pair{&out.neg, &r.neg}}) {
      dst->predicted += src->predicted;
      dst->correct += src->correct;
      dst->gold += src->gold;
      dst->gold_non_cooccurring += src->gold_non_cooccurring;
    }
    out.instances += r.instances;
  }
  const double n = static_cast<double>(docs.size());
  out.pos.precision = pp / n;
  out.pos.recall = pr / n;
  out.neg.precision = np / n;
  out.neg.recall = nr / n;
  out.macro_precision = (out.pos.precision + out.neg.precision) / 2.0;
  out.macro_recall = (out.pos.recall + out.neg.recall) / 2.0;
  out.f1 = f_from_macro(out.macro_precision, out.macro_recall);
  return out;
}

EvalReport evaluate_labels(std::span<const Label> predicted, std::span<const Label> truth) {
  if (predicted.size() != truth.size()) throw std::invalid_argument("prediction and truth sizes differ");
  EvalReport r;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (truth[i] != Label::neu) ++slot(r, truth[i]).gold;
    if (predicted[i] != Label::neu) {
      auto& s = slot(r, predicted[i]);
      ++s.predicted;
      if (predicted[i] == truth[i]) ++s.correct;
    }
  }
  r.instances = truth.size();
  finish(r);
  return r;
}

EvalReport agreement(std::span<const LabeledPair> a, std::span<const LabeledPair> b) {
  std::set<PairKey> keys;
  std::map<PairKey, Label> b_of;
  for (const auto& p : a) keys.insert(p.key);
  for (const auto& g : b) {
    keys.insert(g.key);
    b_of.emplace(g.key, g.label);
  }
  const std::vector<PairKey> instances(keys.begin(), keys.end());
  // Collapse repeated keys in `a`, keeping the first label.
  std::vector<LabeledPair> preds;
  std::set<PairKey> seen;
  for (const auto& p : a) {
    if (seen.insert(p.key).second) preds.push_back(p);
  }
  EvalReport r = evaluate(preds, b, instances);
  for (const auto& p : preds) {
    const auto it = b_of.find(p.key);
    if (it != b_of.end() && p.label != Label::neu && it->second != Label::neu && it->second != p.label) {
      ++r.contradictions;
    }
  }
  r.contradiction_fraction = ratio(r.contradictions, b.size());
  return r;
}

std::optional<Format> parse_format(std::string_view name) {
  if (name == "json") return Format::json;
  if (name == "table") return Format::table;
  return std::nullopt;
}

namespace {

nlohmann::json class_json(const ClassScores& c) {
  return nlohmann::json{{"precision", c.precision},
                        {"recall", c.recall},
                        {"predicted", c.predicted},
                        {"correct", c.correct},
                        {"gold", c.gold},
                        {"gold_non_cooccurring", c.gold_non_cooccurring}};
}

ClassScores class_from_json(const nlohmann::json& j) {
  ClassScores c;
  c.precision = j.at("precision").get<double>();
  c.recall = j.at("recall").get<double>();
  c.predicted = j.at("predicted").get<std::size_t>();
  c.correct = j.at("correct").get<std::size_t>();
  c.gold = j.at("gold").get<std::size_t>();
  c.gold_non_cooccurring = j.at("gold_non_cooccurring").get<std::size_t>();
  return c;
}

}  // namespace

nlohmann::json to_json(const EvalReport& r) {
  return nlohmann::json{{"precision", r.macro_precision},
                        {"recall", r.macro_recall},
                        {"f1", r.f1},
                        {"pos", class_json(r.pos)},
                        {"neg", class_json(r.neg)},
                        {"instances", r.instances},
                        {"documents", r.documents},
                        {"aggregation", std::string(to_string(r.aggregation))},
                        {"contradictions", r.contradictions},
                        {"contradiction_fraction", r.contradiction_fraction}};
}

EvalReport report_from_json(const nlohmann::json& j) {
  EvalReport r;
  r.macro_precision = j.at("precision").get<double>();
  r.macro_recall = j.at("recall").get<double>();
  r.f1 = j.at("f1").get<double>();
  r.pos = class_from_json(j.at("pos"));
  r.neg = class_from_json(j.at("neg"));
  r.instances = j.at("instances").get<std::size_t>();
  r.documents = j.at("documents").get<std::size_t>();
  const auto agg = parse_aggregation(j.at("aggregation").get<std::string>());
  if (!agg) throw Error("unknown aggregation in report");
  r.aggregation = *agg;
  r.contradictions = j.at("contradictions").get<std::size_t>();
  r.contradiction_fraction = j.at("contradiction_fraction").get<double>();
  return r;
}

std::string render_table(const std::vector<std::pair<std::string, EvalReport>>& rows) {
  std::size_t width = 6;
  for (const auto& [name, _] : rows) width = std::max(width, name.size());
  std::ostringstream out;
  char buf[128];
  std::snprintf(buf, sizeof buf, "%-*s  %9s  %9s  %9s\n", static_cast<int>(width), "Method", "Precision", "Recall",
                "F-measure");
  out << buf;
  for (const auto& [name, r] : rows) {
    std::snprintf(buf, sizeof buf, "%-*s  %9.3f  %9.3f  %9.3f\n", static_cast<int>(width), name.c_str(),
                  r.macro_precision, r.macro_recall, r.f1);
    out << buf;
  }
  return out.str();
}

std::string render_report(const EvalReport& report, Format format, const std::string& name) {
  if (format == Format::json) return to_json(report).dump(2) + "\n";
  return render_table({{name, report}});
}

}  // namespace sentrel::eval
