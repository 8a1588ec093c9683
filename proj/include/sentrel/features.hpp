#pragma once

#include <array>
#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "sentrel/corpus.hpp"
#include "sentrel/matrix.hpp"
#include "sentrel/pairing.hpp"
#include "sentrel/parallel.hpp"
#include "sentrel/resources.hpp"

namespace sentrel::features {

enum class FeatureGroup { entity, context_min, context_avg, context_max };

std::string_view to_string(FeatureGroup group);

struct FeatureSpec {
  std::string name;
  FeatureGroup group = FeatureGroup::entity;
  std::string description;
};

// Feature blocks that can be switched off. The default layout has 43 features.
struct FeatureConfig {
  bool similarity = true;  // 1
  bool entity_type = true;  // 8
  bool geo_lists = true;  // 4
  bool frequency = true;  // 2
  bool order = true;  // 1
  bool context = true;  // 27

  friend bool operator==(const FeatureConfig&, const FeatureConfig&) = default;
};

class FeatureManifest {
 public:
  explicit FeatureManifest(std::vector<FeatureSpec> specs);

  const std::vector<FeatureSpec>& specs() const { return specs_; }
  std::size_t size() const { return specs_.size(); }
  std::uint64_t hash() const { return hash_; }
  std::string hash_hex() const;
  std::vector<std::string> names() const;

 private:
  std::vector<FeatureSpec> specs_;
  std::uint64_t hash_ = 0;
};

FeatureManifest describe_manifest(const FeatureConfig& config = {});

// Country and capital lists resolved to synonym groups.
struct GeoLists {
  std::set<GroupId> countries;
  std::set<GroupId> capitals;

  static GeoLists resolve(const std::vector<std::string>& countries, const std::vector<std::string>& capitals,
                          const corpus::SynonymGroups& groups);
};

struct Resources {
  resources::SentimentLexicon lexicon;
  resources::EmbeddingTable embeddings;
  GeoLists geo;
};

struct FeatureVector {
  std::vector<double> values;
  std::uint64_t manifest_id = 0;
};

// The 9 per-context measurements before aggregation.
struct ContextMeasures {
  double pos_terms = 0;
  double neg_terms = 0;
  double sentence_score = 0;
  double before_score = 0;
  double between_score = 0;
  double after_score = 0;
  double distance = 0;
  double entities_between = 0;
  double commas_between = 0;

  static constexpr std::size_t kCount = 9;
  std::array<double, kCount> as_array() const;
};

ContextMeasures measure_context(const pairing::Context& ctx, const corpus::Document& doc,
                                const resources::SentimentLexicon& lex);

FeatureVector extract(const pairing::PairInstance& inst, const corpus::Document& doc, const Resources& res,
                      const FeatureConfig& config = {});

// Feature rows for every instance of a collection, with labels and keys.
struct Dataset {
  Matrix x;
  std::vector<Label> y;
  std::vector<PairKey> keys;
  std::uint64_t manifest_id = 0;
};

Dataset extract_all(const std::vector<corpus::AnnotatedDocument>& docs,
                    const std::vector<pairing::DocumentInstances>& instances, const Resources& res,
                    const FeatureConfig& config = {}, Exec exec = Exec::parallel);

// Z-score standardization fitted on training rows. Constant columns map to 0.
class Scaler {
 public:
  Scaler() = default;
  Scaler(std::vector<double> mean, std::vector<double> stddev) : mean_(std::move(mean)), std_(std::move(stddev)) {}

  static Scaler fit(const Matrix& train);

  Matrix apply(const Matrix& x) const;
  void apply_in_place(std::span<double> row) const;
  // Inverse of apply on columns with non-zero std; constant columns return the mean.
  Matrix invert(const Matrix& z) const;

  const std::vector<double>& mean() const { return mean_; }
  const std::vector<double>& stddev() const { return std_; }

 private:
  std::vector<double> mean_;
  std::vector<double> std_;
};

}  // namespace sentrel::features
