#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "sentrel/types.hpp"

namespace sentrel::eval {

enum class Aggregation { global, per_document };

std::string_view to_string(Aggregation a);
std::optional<Aggregation> parse_aggregation(std::string_view name);

struct ClassScores {
  double precision = 0.0;
  double recall = 0.0;
  std::size_t predicted = 0;
  std::size_t correct = 0;
  std::size_t gold = 0;
  std::size_t gold_non_cooccurring = 0;

  friend bool operator==(const ClassScores&, const ClassScores&) = default;
};

// Precision/recall over the pos and neg classes, macro-averaged, with F as
// the harmonic mean of the macro values.
struct EvalReport {
  ClassScores pos;
  ClassScores neg;
  double macro_precision = 0.0;
  double macro_recall = 0.0;
  double f1 = 0.0;
  std::size_t instances = 0;
  std::size_t documents = 0;
  Aggregation aggregation = Aggregation::global;
  // Filled by agreement(): same ordered pair with opposite polarity.
  std::size_t contradictions = 0;
  double contradiction_fraction = 0.0;

  friend bool operator==(const EvalReport&, const EvalReport&) = default;
};

// 2pr / (p + r); 0 when p + r = 0.
double f_from_macro(double p, double r);

// Scores predictions over generated instances against the full gold set,
// including gold pairs that never co-occur (they only enter recall). Throws
// Error for a prediction whose key is not in `instances` or is repeated.
EvalReport evaluate(std::span<const LabeledPair> predictions, std::span<const LabeledPair> gold,
                    std::span<const PairKey> instances, Aggregation aggregation = Aggregation::global);

// Same metric on parallel label vectors (every gold item has a prediction).
EvalReport evaluate_labels(std::span<const Label> predicted, std::span<const Label> truth);

// Annotator comparison: `a` acts as predictions over the union of pairs, `b`
// as gold.
EvalReport agreement(std::span<const LabeledPair> a, std::span<const LabeledPair> b);

enum class Format { json, table };
std::optional<Format> parse_format(std::string_view name);

nlohmann::json to_json(const EvalReport& report);
EvalReport report_from_json(const nlohmann::json& j);

// Table mode prints "Method  Precision  Recall  F-measure" with 3 decimals.
std::string render_report(const EvalReport& report, Format format, const std::string& name = "result");
std::string render_table(const std::vector<std::pair<std::string, EvalReport>>& rows);

}  // namespace sentrel::eval
