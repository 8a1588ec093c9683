#pragma once

#include <string>
#include <vector>

#include "sentrel/config.hpp"
#include "sentrel/corpus.hpp"
#include "sentrel/features.hpp"
#include "sentrel/pairing.hpp"

namespace sentrel {

// Shared inputs of a run: synonym groups and lexical resources.
struct Workspace {
  RunConfig config;
  corpus::SynonymGroups groups;
  features::Resources resources;

  static Workspace open(const RunConfig& config);
};

// A loaded split with its pair instances and feature rows.
struct PreparedSplit {
  std::vector<corpus::AnnotatedDocument> docs;
  std::vector<pairing::DocumentInstances> instances;
  features::Dataset data;

  std::vector<LabeledPair> gold() const;
  std::vector<PairKey> instance_keys() const { return data.keys; }
};

PreparedSplit prepare_split(const Workspace& ws, const std::vector<std::string>& ids, Exec exec = Exec::parallel);

}  // namespace sentrel
