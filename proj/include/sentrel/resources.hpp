#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace sentrel::resources {

// Term polarity lexicon. Terms are stored as space-joined lowercase word
// pieces so multiword expressions match token sequences.
class SentimentLexicon {
 public:
  SentimentLexicon() = default;

  static SentimentLexicon from_lines(const std::vector<std::string>& lines, const std::string& origin = "<memory>");
  static SentimentLexicon load(const std::filesystem::path& path);

  // Adds or replaces a term; score must be -1, 0 or +1.
  void add(const std::string& term, int score);

  std::optional<int> score(const std::string& term) const;
  std::size_t size() const { return entries_.size(); }
  std::size_t max_term_len() const { return max_term_len_; }

 private:
  friend struct SpanScorer;
  std::unordered_map<std::string, int> entries_;
  std::size_t max_term_len_ = 0;
};

struct SpanScore {
  int pos_count = 0;
  int neg_count = 0;
  double avg_score = 0.0;

  friend bool operator==(const SpanScore&, const SpanScore&) = default;
};

// Greedy longest match left to right. avg_score divides the summed matched
// scores by the number of tokens in the span.
SpanScore score_span(const SentimentLexicon& lex, std::span<const std::string> lemmas);

class EmbeddingTable {
 public:
  EmbeddingTable() = default;
  explicit EmbeddingTable(std::size_t dim) : dim_(dim) {}

  static EmbeddingTable from_lines(const std::vector<std::string>& lines, const std::string& origin = "<memory>");
  static EmbeddingTable load(const std::filesystem::path& path);

  void add(const std::string& word, std::vector<double> vec);

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return vectors_.size(); }
  const std::vector<double>* find(const std::string& word) const;
  const std::vector<std::string>& warnings() const { return warnings_; }

 private:
  std::size_t dim_ = 0;
  std::unordered_map<std::string, std::vector<double>> vectors_;
  std::vector<std::string> warnings_;
};

// Component-wise mean of the in-vocabulary word vectors; nullopt if none.
std::optional<std::vector<double>> phrase_vector(const EmbeddingTable& table, std::span<const std::string> words);

// Throws std::invalid_argument on dimension mismatch; 0 when a norm is 0.
double cosine(std::span<const double> u, std::span<const double> v);

// One name per line; blank lines ignored.
std::vector<std::string> load_name_list(const std::filesystem::path& path);

}  // namespace sentrel::resources
