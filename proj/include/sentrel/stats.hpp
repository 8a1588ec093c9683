#pragma once

#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "sentrel/corpus.hpp"
#include "sentrel/pairing.hpp"

namespace sentrel::corpus {

// Per-document averages over a collection. pos/neg count entity-to-entity
// gold triples; neutral counts neutral pair instances.
struct StatsReport {
  std::size_t documents = 0;
  double avg_sentences = 0;
  double avg_mentions = 0;
  double avg_unique_entities = 0;
  double avg_pos_pairs = 0;
  double avg_neg_pairs = 0;
  double avg_neutral_pairs = 0;
  double avg_author_opinions = 0;
  double avg_non_cooccurring = 0;
};

// Throws Error on an empty collection.
StatsReport collection_stats(const std::vector<AnnotatedDocument>& docs,
                             const pairing::PairingOptions& options = {});

nlohmann::json to_json(const StatsReport& s);
std::string render_stats(const std::vector<std::pair<std::string, StatsReport>>& columns);

}  // namespace sentrel::corpus
