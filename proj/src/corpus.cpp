#include "sentrel/corpus.hpp"

#include <algorithm>
#include <exception>
#include <map>
#include <set>
#include <sstream>

#include "sentrel/error.hpp"
#include "sentrel/text.hpp"

namespace sentrel::corpus {

namespace {

std::string doc_label(const std::string& origin) { return origin; }

bool is_terminal(char32_t c) { return c == U'.' || c == U'!' || c == U'?' || c == U'…'; }

bool strictly_inside(std::size_t pos, const std::vector<Span>& protect) {
  return std::any_of(protect.begin(), protect.end(),
                     [pos](const Span& s) { return s.start < pos && pos < s.end; });
}

}  // namespace

SynonymGroups SynonymGroups::from_lines(const std::vector<std::string>& lines, const std::string& origin) {
  SynonymGroups out;
  for (std::size_t ln = 0; ln < lines.size(); ++ln) {
    std::vector<std::string> names;
    for (auto piece : text::split(lines[ln], ',')) {
      std::string name = text::normalize_name(piece);
      if (name.empty()) continue;
      if (std::find(names.begin(), names.end(), name) != names.end()) continue;
      const auto [it, inserted] = out.index_.emplace(name, out.groups_.size());
      if (!inserted && it->second != out.groups_.size()) {
        throw ConflictError(origin + ":" + std::to_string(ln + 1) + ": name '" + name + "' already listed on line " +
                            std::to_string(it->second + 1));
      }
      names.push_back(std::move(name));
    }
    // Group ids are line numbers, so blank lines still occupy a slot.
    out.groups_.push_back(std::move(names));
  }
  return out;
}

SynonymGroups SynonymGroups::load(const std::filesystem::path& path) {
  return from_lines(text::read_lines(path), path.string());
}

std::optional<std::size_t> SynonymGroups::lookup(std::string_view name) const {
  const auto it = index_.find(text::normalize_name(name));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

GroupId SynonymGroups::resolve(std::string_view name) const {
  std::string norm = text::normalize_name(name);
  const auto it = index_.find(norm);
  if (it == index_.end()) return GroupId(std::move(norm));
  return GroupId(groups_[it->second].front());
}

std::vector<OpinionTriple> parse_opinions(const std::vector<std::string>& lines, const SynonymGroups& groups,
                                          const std::string& origin) {
  std::vector<OpinionTriple> out;
  std::map<std::pair<std::string, GroupId>, std::pair<Label, std::size_t>> seen;
  for (std::size_t ln = 0; ln < lines.size(); ++ln) {
    const auto line = text::trim(lines[ln]);
    if (line.empty() || line.front() == '#') continue;
    const auto fields = text::split(line, ',');
    if (fields.size() != 3) {
      throw ParseError(origin, ln + 1, "expected 'source, target, label', got " + std::to_string(fields.size()) +
                                           " fields");
    }
    const auto label_text = text::trim(fields[2]);
    OpinionTriple t;
    if (label_text == "pos") {
      t.label = Label::pos;
    } else if (label_text == "neg") {
      t.label = Label::neg;
    } else {
      throw ParseError(origin, ln + 1, "label must be pos or neg, got '" + std::string(label_text) + "'");
    }
    const auto source_name = text::trim(fields[0]);
    const auto target_name = text::trim(fields[1]);
    if (source_name.empty() || target_name.empty()) throw ParseError(origin, ln + 1, "empty entity name");
    t.author_source = text::normalize_name(source_name) == "author";
    if (!t.author_source) t.source = groups.resolve(source_name);
    t.target = groups.resolve(target_name);
    if (!t.author_source && t.source == t.target) {
      throw ParseError(origin, ln + 1, "source and target resolve to the same group '" + t.target.key() + "'");
    }
    const auto key = std::make_pair(t.author_source ? std::string("\x01author") : t.source.key(), t.target);
    const auto [it, inserted] = seen.emplace(key, std::make_pair(t.label, ln + 1));
    if (!inserted) {
      if (it->second.first != t.label) {
        throw ConflictError(origin + ":" + std::to_string(ln + 1) + ": pair (" +
                            (t.author_source ? std::string("Author") : t.source.key()) + ", " + t.target.key() +
                            ") labeled both pos and neg (see line " + std::to_string(it->second.second) + ")");
      }
      continue;
    }
    out.push_back(std::move(t));
  }
  return out;
}

std::vector<OpinionTriple> load_opinions(const std::filesystem::path& path, const SynonymGroups& groups) {
  return parse_opinions(text::read_lines(path), groups, path.string());
}

std::vector<MentionRow> parse_annotations(const std::vector<std::string>& lines, const std::string& origin) {
  std::vector<MentionRow> rows;
  for (std::size_t ln = 0; ln < lines.size(); ++ln) {
    const std::string& line = lines[ln];
    if (text::trim(line).empty() || line.front() == '#') continue;
    const auto f = text::split(line, '\t');
    if (f.size() != 5) {
      throw ParseError(origin, ln + 1, "expected 5 tab-separated fields, got " + std::to_string(f.size()));
    }
    MentionRow row;
    row.mention_id = std::string(f[0]);
    const auto type = parse_entity_type(f[1]);
    if (!type) throw ParseError(origin, ln + 1, "unknown entity type '" + std::string(f[1]) + "'");
    row.type = *type;
    const auto parse_offset = [&](std::string_view s) {
      std::size_t v = 0;
      if (s.empty() || !std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; })) {
        throw ParseError(origin, ln + 1, "bad offset '" + std::string(s) + "'");
      }
      for (char c : s) v = v * 10 + static_cast<std::size_t>(c - '0');
      return v;
    };
    row.start = parse_offset(f[2]);
    row.end = parse_offset(f[3]);
    if (row.end <= row.start) throw ParseError(origin, ln + 1, "empty or reversed span");
    row.surface = std::string(f[4]);
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string format_annotations(const Document& doc) {
  std::ostringstream out;
  for (const auto& m : doc.entities) {
    out << m.mention_id << '\t' << to_string(m.type) << '\t' << m.span.start << '\t' << m.span.end << '\t'
        << m.surface << '\n';
  }
  return out.str();
}

std::vector<Span> split_sentences(std::u32string_view text, const std::vector<Span>& protect) {
  std::vector<Span> out;
  const auto emit = [&](std::size_t start, std::size_t end) {
    while (start < end && text::is_space(text[start])) ++start;
    while (end > start && text::is_space(text[end - 1])) --end;
    if (start < end) out.push_back({start, end});
  };
  std::size_t start = 0;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char32_t c = text[i];
    if (c == U'\n') {
      // The newline itself belongs to no sentence.
      if (strictly_inside(i, protect) || strictly_inside(i + 1, protect)) continue;
      emit(start, i);
      start = i + 1;
    } else if (is_terminal(c) && i + 1 < text.size() && text::is_space(text[i + 1])) {
      if (strictly_inside(i + 1, protect)) continue;
      emit(start, i + 1);
      start = i + 1;
    }
  }
  emit(start, text.size());
  return out;
}

std::vector<Token> tokenize(std::u32string_view text, const std::vector<std::size_t>& cuts) {
  std::vector<bool> cut(text.size() + 1, false);
  for (auto p : cuts) {
    if (p <= text.size()) cut[p] = true;
  }
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < text.size()) {
    const char32_t c = text[i];
    if (text::is_space(c)) {
      ++i;
      continue;
    }
    Token tok;
    if (text::is_word_char(c)) {
      std::size_t j = i + 1;
      while (j < text.size() && text::is_word_char(text[j]) && !cut[j]) ++j;
      tok.span = {i, j};
      tok.kind = TokenKind::word;
    } else {
      tok.span = {i, i + 1};
      tok.kind = (c == U',') ? TokenKind::comma : TokenKind::other_punct;
    }
    const auto piece = text.substr(tok.span.start, tok.span.length());
    tok.surface = text::encode_utf8(piece);
    tok.lemma = text::encode_utf8(text::to_lower(piece));
    out.push_back(std::move(tok));
    i = tok.span.end;
  }
  return out;
}

Document build_document(std::string id, std::string_view utf8_text, const std::vector<MentionRow>& mentions,
                        const SynonymGroups& groups, const std::optional<std::vector<std::string>>& lemmas,
                        const std::string& origin) {
  Document doc;
  doc.id = std::move(id);
  doc.text = text::decode_utf8(utf8_text);

  std::set<std::string> ids;
  for (const auto& row : mentions) {
    if (row.end > doc.text.size()) {
      throw ValidationError(doc_label(origin) + ": mention " + row.mention_id + " span [" + std::to_string(row.start) +
                            "," + std::to_string(row.end) + ") exceeds text length " +
                            std::to_string(doc.text.size()));
    }
    if (!ids.insert(row.mention_id).second) {
      throw ValidationError(doc_label(origin) + ": duplicate mention id " + row.mention_id);
    }
    EntityMention m;
    m.mention_id = row.mention_id;
    m.type = row.type;
    m.span = {row.start, row.end};
    m.surface = row.surface;
    const std::string actual = text::encode_utf8(doc.text.substr(row.start, row.end - row.start));
    if (text::normalize_name(actual) != text::normalize_name(row.surface)) {
      throw ValidationError(doc_label(origin) + ": mention " + row.mention_id + " surface '" + row.surface +
                            "' does not match text '" + actual + "'");
    }
    m.group = groups.resolve(row.surface);
    doc.entities.push_back(std::move(m));
  }
  std::stable_sort(doc.entities.begin(), doc.entities.end(),
                   [](const EntityMention& a, const EntityMention& b) { return a.span.start < b.span.start; });
  for (std::size_t i = 1; i < doc.entities.size(); ++i) {
    if (doc.entities[i].span.start < doc.entities[i - 1].span.end) {
      throw ValidationError(doc_label(origin) + ": mention " + doc.entities[i].mention_id + " overlaps " +
                            doc.entities[i - 1].mention_id);
    }
  }

  std::vector<Span> protect;
  std::vector<std::size_t> cuts;
  for (const auto& m : doc.entities) {
    protect.push_back(m.span);
    cuts.push_back(m.span.start);
    cuts.push_back(m.span.end);
  }
  doc.sentences = split_sentences(doc.text, protect);
  doc.tokens = tokenize(doc.text, cuts);

  if (lemmas) {
    std::size_t n_words = 0;
    for (const auto& t : doc.tokens) n_words += t.kind == TokenKind::word;
    if (lemmas->size() != n_words) {
      throw ParseError(origin + ".lemmas", std::min(lemmas->size(), n_words) + 1,
                       "expected " + std::to_string(n_words) + " lemmas (one per word token), got " +
                           std::to_string(lemmas->size()));
    }
    std::size_t k = 0;
    for (auto& t : doc.tokens) {
      if (t.kind == TokenKind::word) t.lemma = text::to_lower_utf8(text::trim((*lemmas)[k++]));
    }
  }

  // Assign tokens to sentences.
  doc.sentence_tokens.reserve(doc.sentences.size());
  std::size_t ti = 0;
  for (const auto& s : doc.sentences) {
    while (ti < doc.tokens.size() && doc.tokens[ti].span.start < s.start) ++ti;
    const std::size_t first = ti;
    while (ti < doc.tokens.size() && doc.tokens[ti].span.end <= s.end) ++ti;
    doc.sentence_tokens.emplace_back(first, ti);
  }

  for (auto& m : doc.entities) {
    const auto sit = std::find_if(doc.sentences.begin(), doc.sentences.end(),
                                  [&](const Span& s) { return s.contains(m.span); });
    if (sit == doc.sentences.end()) {
      throw ValidationError(doc_label(origin) + ": mention " + m.mention_id + " straddles a sentence boundary");
    }
    m.sentence = static_cast<std::size_t>(sit - doc.sentences.begin());
    const auto [first, last] = doc.sentence_tokens[m.sentence];
    m.first_token = last;
    m.end_token = first;
    for (std::size_t t = first; t < last; ++t) {
      if (m.span.contains(doc.tokens[t].span)) {
        m.first_token = std::min(m.first_token, t);
        m.end_token = t + 1;
      }
    }
    if (m.first_token >= m.end_token) {
      throw ValidationError(doc_label(origin) + ": mention " + m.mention_id + " covers no token");
    }
  }
  return doc;
}

Document load_document(const std::filesystem::path& text_path, const std::filesystem::path& ann_path,
                       const std::optional<std::filesystem::path>& lemma_path, const SynonymGroups& groups) {
  const std::string body = text::read_file(text_path);
  const auto rows = parse_annotations(text::read_lines(ann_path), ann_path.string());
  std::optional<std::vector<std::string>> lemmas;
  if (lemma_path) {
    auto lines = text::read_lines(*lemma_path);
    while (!lines.empty() && text::trim(lines.back()).empty()) lines.pop_back();
    lemmas = std::move(lines);
  }
  auto id = text_path.stem().string();
  auto origin = (text_path.parent_path() / id).string();
  return build_document(std::move(id), body, rows, groups, lemmas, origin);
}

AnnotatedDocument load_annotated(const std::filesystem::path& dir, const std::string& id,
                                 const SynonymGroups& groups) {
  const auto base = dir / id;
  const auto with = [&](const char* ext) { return std::filesystem::path(base.string() + ext); };
  std::optional<std::filesystem::path> lemma_path;
  if (std::filesystem::exists(with(".lemmas"))) lemma_path = with(".lemmas");
  AnnotatedDocument out;
  out.doc = load_document(with(".txt"), with(".ann"), lemma_path, groups);
  out.doc.id = id;
  out.opinions = load_opinions(with(".opin.txt"), groups);
  return out;
}

std::vector<AnnotatedDocument> load_collection(const std::filesystem::path& dir, const std::vector<std::string>& ids,
                                               const SynonymGroups& groups, Exec exec) {
  std::vector<AnnotatedDocument> out(ids.size());
  std::vector<std::exception_ptr> errors(ids.size());
  const auto n = static_cast<long>(ids.size());
#pragma omp parallel for schedule(dynamic) if (exec == Exec::parallel)
  for (long i = 0; i < n; ++i) {
    try {
      out[i] = load_annotated(dir, ids[i], groups);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

std::vector<OpinionTriple> unmatched_opinions(const Document& doc, const std::vector<OpinionTriple>& opinions) {
  std::set<GroupId> present;
  for (const auto& m : doc.entities) present.insert(m.group);
  std::vector<OpinionTriple> out;
  for (const auto& t : opinions) {
    const bool source_ok = t.author_source || present.count(t.source);
    if (!source_ok || !present.count(t.target)) out.push_back(t);
  }
  return out;
}

}  // namespace sentrel::corpus
