#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "sentrel/types.hpp"

namespace sentrel::fixture {

struct FixtureSpec {
  std::uint64_t seed = 1;
  std::size_t n_docs = 4;
  std::size_t min_entities = 6;  // groups per document
  std::size_t max_entities = 9;
};

struct FixtureTruth {
  // Every pair instance the pairing step must recover, with its label.
  std::vector<LabeledPair> instances;
  std::vector<std::string> train_ids;
  std::vector<std::string> test_ids;
};

// Writes a small corpus where planted lexicon words fully determine the
// labels: corpus/<id>.{txt,ann,opin.txt,lemmas}, synonyms.txt, lexicon.csv,
// embeddings.txt, countries.txt, capitals.txt, config.json and truth.tsv.
// Throws Error when n_docs is 0 or `out_dir` is a non-empty directory.
FixtureTruth generate(const FixtureSpec& spec, const std::filesystem::path& out_dir);

}  // namespace sentrel::fixture
