#include "sentrel/pairing.hpp"

#include <algorithm>
#include <exception>
#include <limits>
#include <set>

#include "sentrel/error.hpp"

namespace sentrel::pairing {

using corpus::Document;
using corpus::EntityMention;

std::size_t word_distance(const Document& doc, const EntityMention& a, const EntityMention& b) {
  const EntityMention& first = a.first_token <= b.first_token ? a : b;
  const EntityMention& second = a.first_token <= b.first_token ? b : a;
  std::size_t n = 0;
  for (std::size_t t = first.end_token; t < second.first_token; ++t) {
    n += doc.tokens[t].kind == corpus::TokenKind::word;
  }
  return n;
}

namespace {

// Closest mention pair in a sentence, chosen on the canonically ordered
// groups so that (A,B) and (B,A) share one anchor.
std::pair<std::size_t, std::size_t> closest_pair(const Document& doc, const std::vector<std::size_t>& lo_mentions,
                                                 const std::vector<std::size_t>& hi_mentions) {
  std::size_t best_lo = lo_mentions.front();
  std::size_t best_hi = hi_mentions.front();
  std::size_t best = std::numeric_limits<std::size_t>::max();
  for (auto i : lo_mentions) {
    for (auto j : hi_mentions) {
      const std::size_t d = word_distance(doc, doc.entities[i], doc.entities[j]);
      if (d < best) {
        best = d;
        best_lo = i;
        best_hi = j;
      }
    }
  }
  return {best_lo, best_hi};
}

}  // namespace

DocumentInstances build_instances(const Document& doc, const std::vector<corpus::OpinionTriple>& opinions,
                                  const PairingOptions& options) {
  DocumentInstances out;
  out.doc_id = doc.id;

  std::map<std::pair<GroupId, GroupId>, Label> gold;
  for (const auto& t : opinions) {
    if (t.author_source) continue;
    const auto [it, inserted] = gold.emplace(std::make_pair(t.source, t.target), t.label);
    if (!inserted && it->second != t.label) {
      throw ConflictError(doc.id + ": pair (" + t.source.key() + ", " + t.target.key() +
                          ") labeled both pos and neg");
    }
    if (inserted) out.gold.push_back({{doc.id, t.source, t.target}, t.label});
  }

  // sentence -> group -> mention indices (in text order)
  std::vector<std::map<GroupId, std::vector<std::size_t>>> by_sentence(doc.sentences.size());
  for (std::size_t i = 0; i < doc.entities.size(); ++i) {
    by_sentence[doc.entities[i].sentence][doc.entities[i].group].push_back(i);
  }

  std::map<std::pair<GroupId, GroupId>, std::vector<Context>> contexts;
  for (std::size_t s = 0; s < by_sentence.size(); ++s) {
    const auto& groups = by_sentence[s];
    for (auto a = groups.begin(); a != groups.end(); ++a) {
      for (auto b = std::next(a); b != groups.end(); ++b) {
        const auto [ma, mb] = closest_pair(doc, a->second, b->second);
        contexts[{a->first, b->first}].push_back({s, ma, mb});
        contexts[{b->first, a->first}].push_back({s, mb, ma});
      }
    }
  }

  out.instances.reserve(contexts.size());
  for (auto& [pair, ctx] : contexts) {
    PairInstance inst;
    inst.doc_id = doc.id;
    inst.source = pair.first;
    inst.target = pair.second;
    inst.contexts = std::move(ctx);
    if (const auto it = gold.find(pair); it != gold.end()) {
      inst.label = it->second;
    } else if (!options.direction_specific) {
      if (const auto rev = gold.find({pair.second, pair.first}); rev != gold.end()) inst.label = rev->second;
    }
    out.instances.push_back(std::move(inst));
  }

  for (const auto& g : out.gold) {
    if (!contexts.count({g.key.source, g.key.target})) out.non_cooccurring.push_back(g);
  }
  return out;
}

std::vector<DocumentInstances> build_all(const std::vector<corpus::AnnotatedDocument>& docs,
                                         const PairingOptions& options, Exec exec) {
  std::vector<DocumentInstances> out(docs.size());
  std::vector<std::exception_ptr> errors(docs.size());
  const auto n = static_cast<long>(docs.size());
#pragma omp parallel for schedule(dynamic) if (exec == Exec::parallel)
  for (long i = 0; i < n; ++i) {
    try {
      out[i] = build_instances(docs[i].doc, docs[i].opinions, options);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

Counts& Counts::operator+=(const Counts& o) {
  pos += o.pos;
  neg += o.neg;
  neu += o.neu;
  non_cooccurring += o.non_cooccurring;
  return *this;
}

LabelCounts split_counts(const std::vector<DocumentInstances>& docs) {
  LabelCounts out;
  for (const auto& d : docs) {
    Counts c;
    for (const auto& inst : d.instances) {
      switch (inst.label) {
        case Label::pos: ++c.pos; break;
        case Label::neg: ++c.neg; break;
        case Label::neu: ++c.neu; break;
      }
    }
    c.non_cooccurring = d.non_cooccurring.size();
    out.per_document[d.doc_id] += c;
    out.total += c;
  }
  return out;
}

}  // namespace sentrel::pairing
