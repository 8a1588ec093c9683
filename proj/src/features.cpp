#include "sentrel/features.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <map>
#include <stdexcept>

#include "sentrel/error.hpp"
#include "sentrel/text.hpp"

namespace sentrel::features {

using corpus::Document;
using corpus::EntityMention;
using corpus::TokenKind;

std::string_view to_string(FeatureGroup group) {
  switch (group) {
    case FeatureGroup::entity: return "entity";
    case FeatureGroup::context_min: return "context-min";
    case FeatureGroup::context_avg: return "context-avg";
    case FeatureGroup::context_max: return "context-max";
  }
  return "?";
}

FeatureManifest::FeatureManifest(std::vector<FeatureSpec> specs) : specs_(std::move(specs)) {
  std::set<std::string> seen;
  std::string blob;
  for (const auto& s : specs_) {
    if (!seen.insert(s.name).second) throw std::invalid_argument("duplicate feature name " + s.name);
    blob += s.name;
    blob += '\t';
    blob += to_string(s.group);
    blob += '\n';
  }
  hash_ = text::fnv1a64(blob);
}

std::string FeatureManifest::hash_hex() const { return text::hex64(hash_); }

std::vector<std::string> FeatureManifest::names() const {
  std::vector<std::string> out;
  out.reserve(specs_.size());
  for (const auto& s : specs_) out.push_back(s.name);
  return out;
}

namespace {

struct BaseFeature {
  const char* name;
  const char* description;
};

constexpr BaseFeature kContextFeatures[ContextMeasures::kCount] = {
    {"pos_terms", "positive lexicon terms in the sentence"},
    {"neg_terms", "negative lexicon terms in the sentence"},
    {"sentence_score", "summed lexicon score of the sentence divided by its word count"},
    {"before_score", "average lexicon score of words before the first mention"},
    {"between_score", "average lexicon score of words between the mentions"},
    {"after_score", "average lexicon score of words after the second mention"},
    {"distance", "words between the two mentions"},
    {"entities_between", "other entity mentions between the two mentions"},
    {"commas_between", "commas between the two mentions"},
};

constexpr const char* kTypeNames[kNumEntityTypes] = {"PER", "ORG", "LOC", "GEO"};

}  // namespace

FeatureManifest describe_manifest(const FeatureConfig& config) {
  std::vector<FeatureSpec> specs;
  const auto entity = [&](std::string name, std::string desc) {
    specs.push_back({"entity." + std::move(name), FeatureGroup::entity, std::move(desc)});
  };
  if (config.similarity) entity("similarity", "cosine similarity of the two group-name embeddings");
  if (config.entity_type) {
    for (const char* role : {"source", "target"}) {
      for (const char* t : kTypeNames) {
        entity(std::string(role) + "_type_" + t, std::string(role) + " entity type is " + t);
      }
    }
  }
  if (config.geo_lists) {
    for (const char* role : {"source", "target"}) {
      entity(std::string(role) + "_is_country", std::string(role) + " group is in the country list");
      entity(std::string(role) + "_is_capital", std::string(role) + " group is in the capital list");
    }
  }
  if (config.frequency) {
    entity("source_frequency", "source group mentions / all entity mentions in the document");
    entity("target_frequency", "target group mentions / all entity mentions in the document");
  }
  if (config.order) entity("order", "fraction of contexts where the source mention comes first");
  if (config.context) {
    const std::pair<FeatureGroup, const char*> aggs[] = {{FeatureGroup::context_min, "min"},
                                                         {FeatureGroup::context_avg, "avg"},
                                                         {FeatureGroup::context_max, "max"}};
    for (const auto& [group, agg] : aggs) {
      for (const auto& f : kContextFeatures) {
        specs.push_back({std::string("context.") + agg + "." + f.name, group, std::string(agg) + " of " + f.description});
      }
    }
  }
  return FeatureManifest(std::move(specs));
}

GeoLists GeoLists::resolve(const std::vector<std::string>& countries, const std::vector<std::string>& capitals,
                           const corpus::SynonymGroups& groups) {
  GeoLists out;
  for (const auto& n : countries) out.countries.insert(groups.resolve(n));
  for (const auto& n : capitals) out.capitals.insert(groups.resolve(n));
  return out;
}

std::array<double, ContextMeasures::kCount> ContextMeasures::as_array() const {
  return {pos_terms, neg_terms, sentence_score, before_score, between_score, after_score, distance, entities_between,
          commas_between};
}

namespace {

std::vector<std::string> word_lemmas(const Document& doc, std::size_t first, std::size_t last) {
  std::vector<std::string> out;
  for (std::size_t t = first; t < last; ++t) {
    if (doc.tokens[t].kind == TokenKind::word) out.push_back(doc.tokens[t].lemma);
  }
  return out;
}

// Per-document facts shared by every instance of the document.
struct DocumentFacts {
  std::map<GroupId, std::size_t> mentions;
  std::map<GroupId, EntityType> type;
  double total_mentions = 0;

  explicit DocumentFacts(const Document& doc) {
    std::map<GroupId, std::array<std::size_t, kNumEntityTypes>> type_votes;
    for (const auto& m : doc.entities) {
      ++mentions[m.group];
      ++type_votes[m.group][static_cast<std::size_t>(m.type)];
    }
    for (const auto& [g, votes] : type_votes) {
      // Majority type; ties go to the earlier type in PER, ORG, LOC, GEO.
      const auto best = std::max_element(votes.begin(), votes.end()) - votes.begin();
      type[g] = static_cast<EntityType>(best);
    }
    total_mentions = static_cast<double>(doc.entities.size());
  }
};

void check_finite(const std::vector<double>& values) {
  for (double v : values) {
    if (!std::isfinite(v)) throw std::logic_error("non-finite feature value");
  }
}

FeatureVector extract_with(const pairing::PairInstance& inst, const Document& doc, const DocumentFacts& facts,
                           const Resources& res, const FeatureConfig& config, std::uint64_t manifest_id) {
  FeatureVector fv;
  fv.manifest_id = manifest_id;
  auto& v = fv.values;

  if (config.similarity) {
    double sim = 0.0;
    if (res.embeddings.dim() > 0) {
      const auto a = resources::phrase_vector(res.embeddings, text::word_pieces(inst.source.key()));
      const auto b = resources::phrase_vector(res.embeddings, text::word_pieces(inst.target.key()));
      if (a && b) sim = resources::cosine(*a, *b);
    }
    v.push_back(sim);
  }
  if (config.entity_type) {
    for (const auto& g : {inst.source, inst.target}) {
      const auto it = facts.type.find(g);
      for (std::size_t t = 0; t < kNumEntityTypes; ++t) {
        v.push_back(it != facts.type.end() && static_cast<std::size_t>(it->second) == t ? 1.0 : 0.0);
      }
    }
  }
  if (config.geo_lists) {
    for (const auto& g : {inst.source, inst.target}) {
      v.push_back(res.geo.countries.count(g) ? 1.0 : 0.0);
      v.push_back(res.geo.capitals.count(g) ? 1.0 : 0.0);
    }
  }
  if (config.frequency) {
    for (const auto& g : {inst.source, inst.target}) {
      const auto it = facts.mentions.find(g);
      const double n = it == facts.mentions.end() ? 0.0 : static_cast<double>(it->second);
      v.push_back(facts.total_mentions > 0 ? n / facts.total_mentions : 0.0);
    }
  }
  if (config.order) {
    double first = 0;
    for (const auto& c : inst.contexts) {
      first += doc.entities[c.source_mention].span.start < doc.entities[c.target_mention].span.start;
    }
    v.push_back(inst.contexts.empty() ? 0.0 : first / static_cast<double>(inst.contexts.size()));
  }
  if (config.context) {
    std::array<double, ContextMeasures::kCount> lo{};
    std::array<double, ContextMeasures::kCount> hi{};
    std::array<double, ContextMeasures::kCount> sum{};
    lo.fill(std::numeric_limits<double>::infinity());
    hi.fill(-std::numeric_limits<double>::infinity());
    for (const auto& c : inst.contexts) {
      const auto m = measure_context(c, doc, res.lexicon).as_array();
      for (std::size_t k = 0; k < m.size(); ++k) {
        lo[k] = std::min(lo[k], m[k]);
        hi[k] = std::max(hi[k], m[k]);
        sum[k] += m[k];
      }
    }
    const double n = static_cast<double>(inst.contexts.size());
    if (inst.contexts.empty()) {
      lo.fill(0);
      hi.fill(0);
    }
    for (double x : lo) v.push_back(x);
    for (std::size_t k = 0; k < sum.size(); ++k) {
      // Clamp guards the k-context mean against rounding past min or max.
      v.push_back(n > 0 ? std::clamp(sum[k] / n, lo[k], hi[k]) : 0.0);
    }
    for (double x : hi) v.push_back(x);
  }
  check_finite(v);
  return fv;
}

}  // namespace

ContextMeasures measure_context(const pairing::Context& ctx, const Document& doc,
                                const resources::SentimentLexicon& lex) {
  const EntityMention& ms = doc.entities[ctx.source_mention];
  const EntityMention& mt = doc.entities[ctx.target_mention];
  const EntityMention& first = ms.first_token <= mt.first_token ? ms : mt;
  const EntityMention& second = ms.first_token <= mt.first_token ? mt : ms;
  const auto [sent_first, sent_last] = doc.sentence_tokens[ctx.sentence_index];

  ContextMeasures out;
  const auto sentence = resources::score_span(lex, word_lemmas(doc, sent_first, sent_last));
  out.pos_terms = sentence.pos_count;
  out.neg_terms = sentence.neg_count;
  out.sentence_score = sentence.avg_score;
  out.before_score = resources::score_span(lex, word_lemmas(doc, sent_first, first.first_token)).avg_score;
  const auto between = word_lemmas(doc, first.end_token, second.first_token);
  out.between_score = resources::score_span(lex, between).avg_score;
  out.after_score = resources::score_span(lex, word_lemmas(doc, second.end_token, sent_last)).avg_score;
  out.distance = static_cast<double>(between.size());
  for (const auto& m : doc.entities) {
    if (&m == &ms || &m == &mt) continue;
    if (m.first_token >= first.end_token && m.end_token <= second.first_token) out.entities_between += 1;
  }
  for (std::size_t t = first.end_token; t < second.first_token; ++t) {
    out.commas_between += doc.tokens[t].kind == TokenKind::comma;
  }
  return out;
}

FeatureVector extract(const pairing::PairInstance& inst, const Document& doc, const Resources& res,
                      const FeatureConfig& config) {
  return extract_with(inst, doc, DocumentFacts(doc), res, config, describe_manifest(config).hash());
}

Dataset extract_all(const std::vector<corpus::AnnotatedDocument>& docs,
                    const std::vector<pairing::DocumentInstances>& instances, const Resources& res,
                    const FeatureConfig& config, Exec exec) {
  if (docs.size() != instances.size()) throw std::invalid_argument("extract_all: docs and instances differ in size");
  const auto manifest = describe_manifest(config);

  // Flatten (doc, instance) so the parallel loop balances across documents.
  std::vector<std::pair<std::size_t, std::size_t>> jobs;
  for (std::size_t d = 0; d < instances.size(); ++d) {
    for (std::size_t i = 0; i < instances[d].instances.size(); ++i) jobs.emplace_back(d, i);
  }
  std::vector<DocumentFacts> facts;
  facts.reserve(docs.size());
  for (const auto& d : docs) facts.emplace_back(d.doc);

  Dataset out;
  out.manifest_id = manifest.hash();
  out.x = Matrix(jobs.size(), manifest.size());
  out.y.resize(jobs.size());
  out.keys.resize(jobs.size());
  std::exception_ptr error;
  const auto n = static_cast<long>(jobs.size());
#pragma omp parallel for schedule(dynamic, 16) if (exec == Exec::parallel)
  for (long j = 0; j < n; ++j) {
    const auto [d, i] = jobs[j];
    const auto& inst = instances[d].instances[i];
    try {
      const auto fv = extract_with(inst, docs[d].doc, facts[d], res, config, out.manifest_id);
      std::copy(fv.values.begin(), fv.values.end(), out.x.row(j).begin());
    } catch (...) {
#pragma omp critical(sentrel_extract_error)
      if (!error) error = std::current_exception();
    }
    out.y[j] = inst.label;
    out.keys[j] = inst.key();
  }
  if (error) std::rethrow_exception(error);
  return out;
}

Scaler Scaler::fit(const Matrix& train) {
  if (train.empty()) throw Error("cannot fit a scaler on an empty training set");
  const std::size_t d = train.cols();
  std::vector<double> mean(d, 0.0);
  std::vector<double> sd(d, 0.0);
  const double n = static_cast<double>(train.rows());
  for (std::size_t i = 0; i < train.rows(); ++i) {
    for (std::size_t j = 0; j < d; ++j) mean[j] += train(i, j);
  }
  for (auto& m : mean) m /= n;
  for (std::size_t i = 0; i < train.rows(); ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      const double dx = train(i, j) - mean[j];
      sd[j] += dx * dx;
    }
  }
  for (auto& s : sd) s = std::sqrt(s / n);
  return Scaler(std::move(mean), std::move(sd));
}

void Scaler::apply_in_place(std::span<double> row) const {
  if (row.size() != mean_.size()) throw ManifestError("scaler width differs from feature vector width");
  for (std::size_t j = 0; j < row.size(); ++j) {
    row[j] = std_[j] > 0 ? (row[j] - mean_[j]) / std_[j] : 0.0;
  }
}

Matrix Scaler::apply(const Matrix& x) const {
  Matrix out = x;
  for (std::size_t i = 0; i < out.rows(); ++i) apply_in_place(out.row(i));
  return out;
}

Matrix Scaler::invert(const Matrix& z) const {
  Matrix out = z;
  for (std::size_t i = 0; i < out.rows(); ++i) {
    for (std::size_t j = 0; j < out.cols(); ++j) {
      out(i, j) = std_[j] > 0 ? z(i, j) * std_[j] + mean_[j] : mean_[j];
    }
  }
  return out;
}

}  // namespace sentrel::features
