#include <doctest.h>

#include <cmath>
#include <random>

#include "sentrel/error.hpp"
#include "sentrel/resources.hpp"

using namespace sentrel;
using namespace sentrel::resources;

namespace {

SpanScore score(const SentimentLexicon& lex, std::vector<std::string> lemmas) { return score_span(lex, lemmas); }

}  // namespace

TEST_CASE("lexicon orientations") {
  const auto lex = SentimentLexicon::from_lines(
      {"хороший, positive", "так себе, negative", "занятный, positive/negative", "стол, neutral", "# comment"});
  CHECK(lex.score("хороший") == 1);
  CHECK(lex.score("так себе") == -1);
  CHECK(lex.score("занятный") == 0);
  CHECK(lex.score("стол") == 0);
  CHECK_FALSE(lex.score("плохой").has_value());
  CHECK(lex.max_term_len() == 2);
  CHECK_THROWS_AS(SentimentLexicon::from_lines({"хороший, positive", "плохой, bad"}), ParseError);
}

TEST_CASE("lexicon lookup is case-insensitive") {
  const auto lex = SentimentLexicon::from_lines({"Хороший, positive"});
  CHECK(lex.score("хороший") == 1);
}

TEST_CASE("span scoring") {
  SentimentLexicon lex;
  lex.add("хороший", 1);
  lex.add("плохой", -1);
  lex.add("так себе", -1);
  lex.add("так", 1);

  const auto a = score(lex, {"x", "хороший", "y"});
  CHECK(a.pos_count == 1);
  CHECK(a.neg_count == 0);
  CHECK(a.avg_score == doctest::Approx(1.0 / 3.0).epsilon(1e-15));

  CHECK(score(lex, {}) == SpanScore{0, 0, 0.0});
  CHECK(score(lex, {"плохой", "хороший"}) == SpanScore{1, 1, 0.0});

  // Longest match wins over the single-word prefix.
  const auto m = score(lex, {"так", "себе", "вообще"});
  CHECK(m.pos_count == 0);
  CHECK(m.neg_count == 1);
  CHECK(m.avg_score == doctest::Approx(-1.0 / 3.0));
  CHECK(score(lex, {"так", "вот"}).pos_count == 1);
}

TEST_CASE("span count additivity over partitions that keep multiword terms whole") {
  SentimentLexicon lex;
  lex.add("a", 1);
  lex.add("b", -1);
  lex.add("c d", 1);
  lex.add("d", -1);
  const std::vector<std::string> vocab{"a", "b", "c", "d", "z"};
  std::mt19937 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<std::string> seq(1 + rng() % 12);
    for (auto& w : seq) w = vocab[rng() % vocab.size()];
    const auto whole = score_span(lex, seq);
    const std::size_t cut = rng() % (seq.size() + 1);
    if (cut > 0 && cut < seq.size() && seq[cut - 1] == "c" && seq[cut] == "d") continue;
    const auto l = score_span(lex, std::span<const std::string>(seq).first(cut));
    const auto r = score_span(lex, std::span<const std::string>(seq).subspan(cut));
    CHECK(whole.pos_count == l.pos_count + r.pos_count);
    CHECK(whole.neg_count == l.neg_count + r.neg_count);
  }
}

TEST_CASE("embedding table loading") {
  const auto t = EmbeddingTable::from_lines({"2 3", "путин 1 0 0", "россия 0 1 0.5"});
  CHECK(t.size() == 2);
  CHECK(t.dim() == 3);
  REQUIRE(t.find("путин") != nullptr);
  CHECK((*t.find("путин"))[0] == 1.0);
  CHECK(t.find("Путин") != nullptr);
  CHECK(t.find("сша") == nullptr);
}

TEST_CASE("embedding errors") {
  try {
    EmbeddingTable::from_lines({"5 2", "a 1 2", "b 1 2", "c 1 2", "d 1 2", "e 1 2 3"}, "vec.txt");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("row 5") != std::string::npos);
    CHECK(e.line() == 6);
  }
  CHECK_THROWS_AS(EmbeddingTable::from_lines({"3 2", "a 1 2", "b 1 2"}), ParseError);
  CHECK_THROWS_AS(EmbeddingTable::from_lines({"1 2", "a 1 x"}), ParseError);
  CHECK_THROWS_AS(EmbeddingTable::from_lines({}), ParseError);
}

TEST_CASE("duplicate embedding rows: last wins with a warning") {
  const auto t = EmbeddingTable::from_lines({"2 1", "a 1", "a 2"});
  CHECK(t.size() == 1);
  CHECK((*t.find("a"))[0] == 2.0);
  CHECK(t.warnings().size() == 1);
}

TEST_CASE("phrase vectors") {
  EmbeddingTable t(2);
  t.add("путин", {0.25, -3.0});
  t.add("европейский", {1, 0});
  t.add("союз", {0, 1});
  const std::vector<std::string> one{"путин"};
  CHECK(*phrase_vector(t, one) == std::vector<double>{0.25, -3.0});
  const std::vector<std::string> two{"европейский", "союз"};
  CHECK(*phrase_vector(t, two) == std::vector<double>{0.5, 0.5});
  const std::vector<std::string> half{"европейский", "оон"};
  CHECK(*phrase_vector(t, half) == std::vector<double>{1.0, 0.0});
  const std::vector<std::string> none{"оон", "нато"};
  CHECK_FALSE(phrase_vector(t, none).has_value());
}

TEST_CASE("cosine") {
  const std::vector<double> u{1, 2, 2}, v{2, 1, 2}, z{0, 0, 0}, w{-3, 0.5, 7};
  CHECK(cosine(u, v) == doctest::Approx(8.0 / 9.0).epsilon(1e-15));
  CHECK(cosine(u, u) == doctest::Approx(1.0));
  CHECK(cosine(w, w) == doctest::Approx(1.0));
  CHECK(cosine(std::vector<double>{1, 0}, std::vector<double>{0, 1}) == 0.0);
  CHECK(cosine(u, z) == 0.0);
  CHECK_THROWS_AS(cosine(u, std::vector<double>{1, 2}), std::invalid_argument);
  std::mt19937 rng(3);
  std::normal_distribution<double> n;
  for (int i = 0; i < 100; ++i) {
    std::vector<double> a(5), b(5);
    for (auto& x : a) x = n(rng);
    for (auto& x : b) x = n(rng);
    const double c = cosine(a, b);
    CHECK(c == cosine(b, a));
    CHECK(c <= 1.0);
    CHECK(c >= -1.0);
  }
}
