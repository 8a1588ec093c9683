#include <doctest.h>

#include "sentrel/error.hpp"
#include "sentrel/text.hpp"
#include "sentrel/types.hpp"

using namespace sentrel;

TEST_CASE("utf8 round trip across scripts") {
  const std::string s = "Путин, ЕС and Ελλάδα…";
  const auto cps = text::decode_utf8(s);
  CHECK(cps.size() == 21);
  CHECK(text::encode_utf8(cps) == s);
}

TEST_CASE("utf8 rejects malformed input and strips a BOM") {
  CHECK_THROWS_AS(text::decode_utf8("\xD0"), ValidationError);
  CHECK_THROWS_AS(text::decode_utf8("a\xFFz"), ValidationError);
  CHECK(text::decode_utf8("\xEF\xBB\xBFok") == U"ok");
}

TEST_CASE("name normalization is lowercase plus whitespace collapse and idempotent") {
  CHECK(text::normalize_name("  Российская \t Федерация ") == "российская федерация");
  CHECK(text::normalize_name("ЁЛКА Ünïon") == "ёлка ünïon");
  const auto once = text::normalize_name(" Владимир   ПУТИН ");
  CHECK(text::normalize_name(once) == once);
}

TEST_CASE("word pieces") {
  const auto p = text::word_pieces("Так себе, ну-ну!");
  REQUIRE(p.size() == 3);
  CHECK(p[0] == "так");
  CHECK(p[1] == "себе");
  CHECK(p[2] == "ну-ну");
}

TEST_CASE("labels and entity types parse") {
  CHECK(parse_label("pos") == Label::pos);
  CHECK(parse_label("neu") == Label::neu);
  CHECK_FALSE(parse_label("positive").has_value());
  CHECK(parse_entity_type("GEO") == EntityType::geo);
  CHECK_FALSE(parse_entity_type("MISC").has_value());
}

TEST_CASE("fnv1a64 reference values") {
  CHECK(text::fnv1a64("") == 0xcbf29ce484222325ULL);
  CHECK(text::fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
  CHECK(text::hex64(0xabcULL) == "0000000000000abc");
}
