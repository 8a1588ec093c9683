#include "sentrel/stats.hpp"

#include <cstdio>
#include <set>
#include <sstream>

#include "sentrel/error.hpp"

namespace sentrel::corpus {

StatsReport collection_stats(const std::vector<AnnotatedDocument>& docs, const pairing::PairingOptions& options) {
  if (docs.empty()) throw Error("cannot compute statistics of an empty collection");
  StatsReport s;
  s.documents = docs.size();
  for (const auto& d : docs) {
    s.avg_sentences += static_cast<double>(d.doc.sentences.size());
    s.avg_mentions += static_cast<double>(d.doc.entities.size());
    std::set<GroupId> unique;
    for (const auto& m : d.doc.entities) unique.insert(m.group);
    s.avg_unique_entities += static_cast<double>(unique.size());
    for (const auto& o : d.opinions) {
      if (o.author_source) {
        s.avg_author_opinions += 1;
      } else if (o.label == Label::pos) {
        s.avg_pos_pairs += 1;
      } else {
        s.avg_neg_pairs += 1;
      }
    }
    const auto inst = pairing::build_instances(d.doc, d.opinions, options);
    for (const auto& i : inst.instances) s.avg_neutral_pairs += i.label == Label::neu;
    s.avg_non_cooccurring += static_cast<double>(inst.non_cooccurring.size());
  }
  const double n = static_cast<double>(docs.size());
  for (double* v : {&s.avg_sentences, &s.avg_mentions, &s.avg_unique_entities, &s.avg_pos_pairs, &s.avg_neg_pairs,
                    &s.avg_neutral_pairs, &s.avg_author_opinions, &s.avg_non_cooccurring}) {
    *v /= n;
  }
  return s;
}

nlohmann::json to_json(const StatsReport& s) {
  return nlohmann::json{{"documents", s.documents},
                        {"avg_sentences", s.avg_sentences},
                        {"avg_mentions", s.avg_mentions},
                        {"avg_unique_entities", s.avg_unique_entities},
                        {"avg_pos_pairs", s.avg_pos_pairs},
                        {"avg_neg_pairs", s.avg_neg_pairs},
                        {"avg_neutral_pairs", s.avg_neutral_pairs},
                        {"avg_author_opinions", s.avg_author_opinions},
                        {"avg_non_cooccurring", s.avg_non_cooccurring}};
}

std::string render_stats(const std::vector<std::pair<std::string, StatsReport>>& columns) {
  struct Row {
    const char* label;
    double StatsReport::*field;
  };
  static const Row rows[] = {
      {"Average number of sentences per document", &StatsReport::avg_sentences},
      {"Average number of mentioned entities per document", &StatsReport::avg_mentions},
      {"Average number of unique named entities per document", &StatsReport::avg_unique_entities},
      {"Average number of positive pairs per document", &StatsReport::avg_pos_pairs},
      {"Average number of negative pairs per document", &StatsReport::avg_neg_pairs},
      {"Average number of neutral pairs per document", &StatsReport::avg_neutral_pairs},
      {"Average number of author opinions per document", &StatsReport::avg_author_opinions},
      {"Average number of non-co-occurring gold pairs per document", &StatsReport::avg_non_cooccurring},
  };
  std::ostringstream out;
  char buf[256];
  std::snprintf(buf, sizeof buf, "%-60s", "");
  out << buf;
  for (const auto& [name, _] : columns) {
    std::snprintf(buf, sizeof buf, "  %12s", name.c_str());
    out << buf;
  }
  out << "\n";
  std::snprintf(buf, sizeof buf, "%-60s", "Number of documents");
  out << buf;
  for (const auto& [_, s] : columns) {
    std::snprintf(buf, sizeof buf, "  %12zu", s.documents);
    out << buf;
  }
  out << "\n";
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%-60s", r.label);
    out << buf;
    for (const auto& [_, s] : columns) {
      std::snprintf(buf, sizeof buf, "  %12.2f", s.*(r.field));
      out << buf;
    }
    out << "\n";
  }
  return out.str();
}

}  // namespace sentrel::corpus
