#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "sentrel/parallel.hpp"
#include "sentrel/types.hpp"

namespace sentrel::corpus {

// Half-open range of Unicode code points.
struct Span {
  std::size_t start = 0;
  std::size_t end = 0;

  std::size_t length() const { return end - start; }
  bool contains(const Span& other) const { return start <= other.start && other.end <= end; }
  friend bool operator==(const Span&, const Span&) = default;
};

enum class TokenKind { word, comma, other_punct };

struct Token {
  Span span;
  std::string surface;
  std::string lemma;  // lowercased
  TokenKind kind = TokenKind::word;
};

struct EntityMention {
  std::string mention_id;
  EntityType type = EntityType::per;
  Span span;
  std::string surface;
  GroupId group;
  // Derived at load time.
  std::size_t sentence = 0;
  std::size_t first_token = 0;
  std::size_t end_token = 0;  // exclusive
};

struct Document {
  std::string id;
  std::u32string text;
  std::vector<Span> sentences;
  std::vector<Token> tokens;
  // Token index range [first, second) for each sentence.
  std::vector<std::pair<std::size_t, std::size_t>> sentence_tokens;
  // Sorted by span start.
  std::vector<EntityMention> entities;
};

// Raw annotation row as it appears in an .ann file.
struct MentionRow {
  std::string mention_id;
  EntityType type = EntityType::per;
  std::size_t start = 0;
  std::size_t end = 0;
  std::string surface;

  friend bool operator==(const MentionRow&, const MentionRow&) = default;
};

class SynonymGroups {
 public:
  SynonymGroups() = default;

  // One comma-separated group per line. Throws ConflictError if a normalized
  // name occurs on two lines.
  static SynonymGroups from_lines(const std::vector<std::string>& lines, const std::string& origin = "<memory>");
  static SynonymGroups load(const std::filesystem::path& path);

  std::size_t size() const { return groups_.size(); }
  const std::vector<std::string>& names(std::size_t group) const { return groups_.at(group); }

  // 0-based line number of the group holding `name`, if listed.
  std::optional<std::size_t> lookup(std::string_view name) const;

  // Group of a surface name; unlisted names become singleton groups.
  GroupId resolve(std::string_view name) const;

 private:
  std::vector<std::vector<std::string>> groups_;  // normalized names
  std::unordered_map<std::string, std::size_t> index_;
};

struct OpinionTriple {
  bool author_source = false;
  GroupId source;  // empty when author_source
  GroupId target;
  Label label = Label::pos;

  friend bool operator==(const OpinionTriple&, const OpinionTriple&) = default;
};

std::vector<OpinionTriple> parse_opinions(const std::vector<std::string>& lines, const SynonymGroups& groups,
                                          const std::string& origin = "<memory>");
std::vector<OpinionTriple> load_opinions(const std::filesystem::path& path, const SynonymGroups& groups);

// Parses .ann rows. Empty lines and lines starting with '#' are skipped.
std::vector<MentionRow> parse_annotations(const std::vector<std::string>& lines, const std::string& origin = "<memory>");
std::string format_annotations(const Document& doc);

// Builds and validates a document from in-memory parts. `lemmas`, when
// given, holds one lemma per word token.
Document build_document(std::string id, std::string_view utf8_text, const std::vector<MentionRow>& mentions,
                        const SynonymGroups& groups,
                        const std::optional<std::vector<std::string>>& lemmas = std::nullopt,
                        const std::string& origin = "<memory>");

Document load_document(const std::filesystem::path& text_path, const std::filesystem::path& ann_path,
                       const std::optional<std::filesystem::path>& lemma_path, const SynonymGroups& groups);

// Sentence boundaries: after . ! ? … followed by whitespace, and at every
// newline, unless the break falls inside one of `protect`.
std::vector<Span> split_sentences(std::u32string_view text, const std::vector<Span>& protect = {});

// Words are maximal runs of letters, digits and hyphens, additionally cut at
// every position in `cuts` (entity boundaries).
std::vector<Token> tokenize(std::u32string_view text, const std::vector<std::size_t>& cuts = {});

struct AnnotatedDocument {
  Document doc;
  std::vector<OpinionTriple> opinions;
};

// Loads <id>.txt, <id>.ann, <id>.opin.txt and, if present, <id>.lemmas.
AnnotatedDocument load_annotated(const std::filesystem::path& dir, const std::string& id, const SynonymGroups& groups);
std::vector<AnnotatedDocument> load_collection(const std::filesystem::path& dir, const std::vector<std::string>& ids,
                                               const SynonymGroups& groups, Exec exec = Exec::parallel);

// Opinion triples naming a group that has no mention in the document.
std::vector<OpinionTriple> unmatched_opinions(const Document& doc, const std::vector<OpinionTriple>& opinions);

}  // namespace sentrel::corpus
