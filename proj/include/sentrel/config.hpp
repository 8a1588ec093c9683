#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "sentrel/eval.hpp"
#include "sentrel/features.hpp"
#include "sentrel/models.hpp"
#include "sentrel/pairing.hpp"

namespace sentrel {

// Everything a command needs. Relative paths are resolved against the
// directory of the config file.
struct RunConfig {
  std::filesystem::path corpus_dir;
  std::filesystem::path synonyms;
  std::optional<std::filesystem::path> lexicon;
  std::optional<std::filesystem::path> embeddings;
  std::optional<std::filesystem::path> countries;
  std::optional<std::filesystem::path> capitals;
  std::filesystem::path output_dir = "out";

  std::vector<std::string> train_ids;
  std::vector<std::string> test_ids;

  models::Kind classifier = models::Kind::random_forest;
  models::Hyperparams hyperparams;
  models::Grid grid;  // empty = default grid for the classifier
  std::size_t folds = 3;
  features::FeatureConfig features;
  pairing::PairingOptions pairing;
  eval::Aggregation aggregation = eval::Aggregation::global;
  models::DistrMode distr_mode = models::DistrMode::three_class;
  std::uint64_t seed = 1;
  int workers = 0;

  // Parses the JSON config. Throws Error on unknown keys or bad values.
  static RunConfig from_json(const nlohmann::json& j, const std::filesystem::path& base_dir);
  static RunConfig load(const std::filesystem::path& path);

  // Resolved config, every default spelled out; echoed into reports.
  nlohmann::json to_json() const;
  std::string hash_hex() const;

  // Disjoint splits and existing input paths; throws IoError naming a
  // missing path.
  void validate() const;
};

models::Grid default_grid(models::Kind kind);

}  // namespace sentrel
