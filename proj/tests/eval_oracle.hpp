#pragma once

// Brute-force metric oracle and random case generator shared by the unit and
// acceptance tests.

#include <algorithm>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "sentrel/eval.hpp"

namespace sentrel::testing {

using eval::ClassScores;
using eval::EvalReport;

inline PairKey key(const std::string& doc, const std::string& s, const std::string& t) {
  return {doc, GroupId(s), GroupId(t)};
}

struct Case {
  std::vector<LabeledPair> predictions;
  std::vector<LabeledPair> gold;
  std::vector<PairKey> instances;
};

// Up to 50 candidate pairs over a few documents. Some gold pairs have no
// instance; some instances carry no prediction.
inline Case random_case(std::mt19937_64& rng) {
  const std::vector<std::string> names{"a", "b", "c", "d", "e", "f"};
  const std::size_t docs = 1 + rng() % 3;
  std::vector<PairKey> all;
  for (std::size_t d = 0; d < docs; ++d) {
    for (const auto& s : names) {
      for (const auto& t : names) {
        if (s != t) all.push_back(key("doc" + std::to_string(d), s, t));
      }
    }
  }
  std::shuffle(all.begin(), all.end(), rng);
  all.resize(std::min<std::size_t>(all.size(), 1 + rng() % 50));
  Case c;
  for (const auto& k : all) {
    const bool instance = rng() % 4 != 0;
    const auto g = rng() % 5;
    if (g == 0) c.gold.push_back({k, Label::pos});
    if (g == 1) c.gold.push_back({k, Label::neg});
    if (!instance) continue;
    c.instances.push_back(k);
    if (rng() % 6 == 0) continue;
    c.predictions.push_back({k, kAllLabels[rng() % 3]});
  }
  return c;
}

inline double oracle_ratio(std::size_t a, std::size_t b) { return b == 0 ? 0.0 : double(a) / double(b); }

// Independent recount: walk every key in the universe once per class.
inline EvalReport oracle(const Case& c, const std::string& only_doc = "") {
  std::set<PairKey> universe;
  std::map<PairKey, Label> pred, gold;
  for (const auto& p : c.predictions) {
    universe.insert(p.key);
    pred[p.key] = p.label;
  }
  for (const auto& g : c.gold) {
    universe.insert(g.key);
    gold[g.key] = g.label;
  }
  EvalReport r;
  for (Label cls : {Label::pos, Label::neg}) {
    ClassScores s;
    for (const auto& k : universe) {
      if (!only_doc.empty() && k.doc_id != only_doc) continue;
      const Label p = pred.count(k) ? pred[k] : Label::neu;
      const Label g = gold.count(k) ? gold[k] : Label::neu;
      const bool has_instance = std::find(c.instances.begin(), c.instances.end(), k) != c.instances.end();
      if (p == cls) ++s.predicted;
      if (g == cls) ++s.gold;
      if (g == cls && !has_instance) ++s.gold_non_cooccurring;
      if (p == cls && g == cls) ++s.correct;
    }
    s.precision = oracle_ratio(s.correct, s.predicted);
    s.recall = oracle_ratio(s.correct, s.gold);
    (cls == Label::pos ? r.pos : r.neg) = s;
  }
  r.macro_precision = (r.pos.precision + r.neg.precision) / 2.0;
  r.macro_recall = (r.pos.recall + r.neg.recall) / 2.0;
  r.f1 = r.macro_precision + r.macro_recall == 0.0
             ? 0.0
             : 2.0 * r.macro_precision * r.macro_recall / (r.macro_precision + r.macro_recall);
  return r;
}

}  // namespace sentrel::testing
