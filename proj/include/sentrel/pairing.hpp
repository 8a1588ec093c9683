#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "sentrel/corpus.hpp"
#include "sentrel/parallel.hpp"
#include "sentrel/types.hpp"

namespace sentrel::pairing {

// One shared sentence of a pair, anchored on the closest mention pair.
struct Context {
  std::size_t sentence_index = 0;
  std::size_t source_mention = 0;  // index into Document::entities
  std::size_t target_mention = 0;

  friend bool operator==(const Context&, const Context&) = default;
};

struct PairInstance {
  std::string doc_id;
  GroupId source;
  GroupId target;
  std::vector<Context> contexts;
  Label label = Label::neu;

  PairKey key() const { return {doc_id, source, target}; }
};

struct PairingOptions {
  // When false, a gold (A,B,l) also labels (B,A) with l unless (B,A) has its
  // own gold triple.
  bool direction_specific = true;
};

struct DocumentInstances {
  std::string doc_id;
  std::vector<PairInstance> instances;  // sorted by (source, target)
  std::vector<LabeledPair> gold;        // all NE-NE gold triples of the doc
  std::vector<LabeledPair> non_cooccurring;
};

// Number of word tokens strictly between two mentions of one sentence.
std::size_t word_distance(const corpus::Document& doc, const corpus::EntityMention& a, const corpus::EntityMention& b);

// Gold triples with an AUTHOR source are ignored. Throws ConflictError when
// one ordered pair carries both pos and neg.
DocumentInstances build_instances(const corpus::Document& doc, const std::vector<corpus::OpinionTriple>& opinions,
                                  const PairingOptions& options = {});

std::vector<DocumentInstances> build_all(const std::vector<corpus::AnnotatedDocument>& docs,
                                         const PairingOptions& options = {}, Exec exec = Exec::parallel);

struct Counts {
  std::size_t pos = 0;
  std::size_t neg = 0;
  std::size_t neu = 0;
  std::size_t non_cooccurring = 0;

  Counts& operator+=(const Counts& o);
  friend bool operator==(const Counts&, const Counts&) = default;
};

struct LabelCounts {
  std::map<std::string, Counts> per_document;
  Counts total;
};

LabelCounts split_counts(const std::vector<DocumentInstances>& docs);

}  // namespace sentrel::pairing
