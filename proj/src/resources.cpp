#include "sentrel/resources.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <stdexcept>

#include "sentrel/error.hpp"
#include "sentrel/text.hpp"

namespace sentrel::resources {

namespace {

std::string join(std::span<const std::string> parts) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out.push_back(' ');
    out += parts[i];
  }
  return out;
}

}  // namespace

void SentimentLexicon::add(const std::string& term, int score) {
  if (score < -1 || score > 1) throw std::invalid_argument("lexicon score must be -1, 0 or +1");
  const auto pieces = text::word_pieces(term);
  if (pieces.empty()) return;
  entries_[join(pieces)] = score;
  max_term_len_ = std::max(max_term_len_, pieces.size());
}

std::optional<int> SentimentLexicon::score(const std::string& term) const {
  const auto it = entries_.find(join(text::word_pieces(term)));
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

SentimentLexicon SentimentLexicon::from_lines(const std::vector<std::string>& lines, const std::string& origin) {
  SentimentLexicon lex;
  for (std::size_t ln = 0; ln < lines.size(); ++ln) {
    const auto line = text::trim(lines[ln]);
    if (line.empty() || line.front() == '#' || line.front() == '!') continue;
    const auto comma = line.rfind(',');
    if (comma == std::string_view::npos) throw ParseError(origin, ln + 1, "expected 'term, orientation'");
    const auto term = text::trim(line.substr(0, comma));
    const auto orientation = text::trim(line.substr(comma + 1));
    int score = 0;
    if (orientation == "positive") {
      score = 1;
    } else if (orientation == "negative") {
      score = -1;
    } else if (orientation == "neutral" || orientation == "positive/negative") {
      score = 0;
    } else {
      throw ParseError(origin, ln + 1, "unknown orientation '" + std::string(orientation) + "'");
    }
    if (term.empty()) throw ParseError(origin, ln + 1, "empty term");
    lex.add(std::string(term), score);
  }
  return lex;
}

SentimentLexicon SentimentLexicon::load(const std::filesystem::path& path) {
  return from_lines(text::read_lines(path), path.string());
}

SpanScore score_span(const SentimentLexicon& lex, std::span<const std::string> lemmas) {
  SpanScore out;
  if (lemmas.empty()) return out;
  int sum = 0;
  std::size_t i = 0;
  while (i < lemmas.size()) {
    std::size_t matched = 0;
    int score = 0;
    const std::size_t longest = std::min(lex.max_term_len(), lemmas.size() - i);
    for (std::size_t len = longest; len >= 1; --len) {
      if (const auto s = lex.score(join(lemmas.subspan(i, len)))) {
        matched = len;
        score = *s;
        break;
      }
    }
    if (matched == 0) {
      ++i;
      continue;
    }
    out.pos_count += score > 0;
    out.neg_count += score < 0;
    sum += score;
    i += matched;
  }
  out.avg_score = static_cast<double>(sum) / static_cast<double>(lemmas.size());
  return out;
}

void EmbeddingTable::add(const std::string& word, std::vector<double> vec) {
  if (vec.size() != dim_) throw std::invalid_argument("embedding dimension mismatch");
  const std::string key = text::to_lower_utf8(word);
  const auto [it, inserted] = vectors_.insert_or_assign(key, std::move(vec));
  if (!inserted) warnings_.push_back("duplicate embedding for '" + key + "', keeping the last one");
}

const std::vector<double>* EmbeddingTable::find(const std::string& word) const {
  const auto it = vectors_.find(text::to_lower_utf8(word));
  return it == vectors_.end() ? nullptr : &it->second;
}

EmbeddingTable EmbeddingTable::from_lines(const std::vector<std::string>& lines, const std::string& origin) {
  const auto fields = [](std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size()) {
      while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
      const std::size_t start = i;
      while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
      if (i > start) out.push_back(line.substr(start, i - start));
    }
    return out;
  };
  if (lines.empty()) throw ParseError(origin, 1, "missing 'vocab_size dim' header");
  const auto header = fields(lines[0]);
  std::size_t vocab = 0;
  std::size_t dim = 0;
  const auto parse_count = [&](std::string_view s, std::size_t& v) {
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    return res.ec == std::errc() && res.ptr == s.data() + s.size();
  };
  if (header.size() != 2 || !parse_count(header[0], vocab) || !parse_count(header[1], dim) || dim == 0) {
    throw ParseError(origin, 1, "header must be 'vocab_size dim' with dim > 0");
  }
  EmbeddingTable table(dim);
  std::size_t rows = 0;
  for (std::size_t ln = 1; ln < lines.size(); ++ln) {
    const auto f = fields(lines[ln]);
    if (f.empty()) continue;
    if (f.size() != dim + 1) {
      throw ParseError(origin, ln + 1, "row " + std::to_string(rows + 1) + " has " + std::to_string(f.size() - 1) +
                                           " values, expected " +
                                           std::to_string(dim));
    }
    std::vector<double> vec(dim);
    for (std::size_t k = 0; k < dim; ++k) {
      const auto res = std::from_chars(f[k + 1].data(), f[k + 1].data() + f[k + 1].size(), vec[k]);
      if (res.ec != std::errc() || !std::isfinite(vec[k])) {
        throw ParseError(origin, ln + 1, "bad number '" + std::string(f[k + 1]) + "'");
      }
    }
    table.add(std::string(f[0]), std::move(vec));
    ++rows;
  }
  if (rows != vocab) {
    throw ParseError(origin, lines.size(), "header declares " + std::to_string(vocab) + " rows, found " +
                                               std::to_string(rows));
  }
  return table;
}

EmbeddingTable EmbeddingTable::load(const std::filesystem::path& path) {
  return from_lines(text::read_lines(path), path.string());
}

std::optional<std::vector<double>> phrase_vector(const EmbeddingTable& table, std::span<const std::string> words) {
  std::vector<double> sum(table.dim(), 0.0);
  std::size_t found = 0;
  for (const auto& w : words) {
    const auto* v = table.find(w);
    if (!v) continue;
    for (std::size_t k = 0; k < sum.size(); ++k) sum[k] += (*v)[k];
    ++found;
  }
  if (found == 0) return std::nullopt;
  if (found > 1) {
    for (auto& x : sum) x /= static_cast<double>(found);
  }
  return sum;
}

double cosine(std::span<const double> u, std::span<const double> v) {
  if (u.size() != v.size()) throw std::invalid_argument("cosine: dimension mismatch");
  double dot = 0.0;
  double nu = 0.0;
  double nv = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    dot += u[i] * v[i];
    nu += u[i] * u[i];
    nv += v[i] * v[i];
  }
  if (nu == 0.0 || nv == 0.0) return 0.0;
  return std::clamp(dot / (std::sqrt(nu) * std::sqrt(nv)), -1.0, 1.0);
}

std::vector<std::string> load_name_list(const std::filesystem::path& path) {
  std::vector<std::string> out;
  for (const auto& line : text::read_lines(path)) {
    const auto t = text::trim(line);
    if (!t.empty() && t.front() != '#') out.emplace_back(t);
  }
  return out;
}

}  // namespace sentrel::resources
