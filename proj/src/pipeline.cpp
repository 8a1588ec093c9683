#include "sentrel/pipeline.hpp"

namespace sentrel {

Workspace Workspace::open(const RunConfig& config) {
  config.validate();
  set_worker_count(config.workers);
  Workspace ws;
  ws.config = config;
  ws.groups = corpus::SynonymGroups::load(config.synonyms);
  if (config.lexicon) ws.resources.lexicon = resources::SentimentLexicon::load(*config.lexicon);
  if (config.embeddings) ws.resources.embeddings = resources::EmbeddingTable::load(*config.embeddings);
  std::vector<std::string> countries;
  std::vector<std::string> capitals;
  if (config.countries) countries = resources::load_name_list(*config.countries);
  if (config.capitals) capitals = resources::load_name_list(*config.capitals);
  ws.resources.geo = features::GeoLists::resolve(countries, capitals, ws.groups);
  return ws;
}

std::vector<LabeledPair> PreparedSplit::gold() const {
  std::vector<LabeledPair> out;
  for (const auto& d : instances) out.insert(out.end(), d.gold.begin(), d.gold.end());
  return out;
}

PreparedSplit prepare_split(const Workspace& ws, const std::vector<std::string>& ids, Exec exec) {
  PreparedSplit s;
  s.docs = corpus::load_collection(ws.config.corpus_dir, ids, ws.groups, exec);
  s.instances = pairing::build_all(s.docs, ws.config.pairing, exec);
  s.data = features::extract_all(s.docs, s.instances, ws.resources, ws.config.features, exec);
  return s;
}

}  // namespace sentrel
