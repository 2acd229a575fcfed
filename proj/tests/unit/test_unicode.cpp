#include <doctest.h>

#include <string>

#include "vta/rng.hpp"
#include "vta/textpipe.hpp"
#include "vta/unicode.hpp"

using namespace vta;

namespace {

// Random code point biased toward interesting planes; surrogates excluded.
char32_t random_code_point(Rng& rng) {
  switch (rng.uniform_index(6)) {
    case 0: return static_cast<char32_t>(0x20 + rng.uniform_index(0x5F));
    case 1: return static_cast<char32_t>(0xA0 + rng.uniform_index(0x2000 - 0xA0));
    case 2: return static_cast<char32_t>(0x2000 + rng.uniform_index(0x1000));
    case 3: return static_cast<char32_t>(0x1F000 + rng.uniform_index(0xB00));
    case 4: {
      const char32_t cp = static_cast<char32_t>(rng.uniform_index(0x110000));
      return (cp >= 0xD800 && cp <= 0xDFFF) ? U'x' : cp;
    }
    default: return U" \t\n"[rng.uniform_index(3)];
  }
}

std::string random_text(Rng& rng) {
  std::u32string cps(rng.uniform_index(40), U'a');
  for (auto& cp : cps) cp = random_code_point(rng);
  return unicode::encode_utf8(cps);
}

std::string random_bytes(Rng& rng) {
  std::string s(rng.uniform_index(32), '\0');
  for (auto& c : s) c = static_cast<char>(rng.uniform_index(256));
  return s;
}

}  // namespace

TEST_CASE("utf-8 round trip") {
  const std::u32string cps = {U'a', 0xE9, 0x20AC, 0x1F44D, 0x10FFFF};
  const auto bytes = unicode::encode_utf8(cps);
  CHECK(bytes == "a\xC3\xA9\xE2\x82\xAC\xF0\x9F\x91\x8D\xF4\x8F\xBF\xBF");
  CHECK(unicode::decode_utf8(bytes) == cps);
}

TEST_CASE("ill-formed utf-8 decodes to replacement characters") {
  // A complete but invalid sequence yields one replacement.
  CHECK(unicode::decode_utf8("\xC0\xAF") == std::u32string{0xFFFD});          // overlong
  CHECK(unicode::decode_utf8("\xED\xA0\x80z") == std::u32string{0xFFFD, U'z'});  // surrogate
  CHECK(unicode::decode_utf8("\xF4\x90\x80\x80") == std::u32string{0xFFFD});  // above U+10FFFF
  CHECK(unicode::decode_utf8("a\xE2\x82") == std::u32string{U'a', 0xFFFD});       // truncated
  CHECK(unicode::decode_utf8("\xFF") == std::u32string{0xFFFD});
  CHECK(unicode::decode_utf8("\x80z") == std::u32string{0xFFFD, U'z'});
}

TEST_CASE("decode never fails on random bytes and re-encodes to valid utf-8") {
  Rng rng(5);
  for (int i = 0; i < 2000; ++i) {
    const auto cps = unicode::decode_utf8(random_bytes(rng));
    const auto bytes = unicode::encode_utf8(cps);
    CHECK(unicode::decode_utf8(bytes) == cps);
  }
}

TEST_CASE("lowercase mapping") {
  CHECK(unicode::to_lower(U'A') == U'a');
  CHECK(unicode::to_lower(U'z') == U'z');
  CHECK(unicode::to_lower(0xC9) == 0xE9);      // É
  CHECK(unicode::to_lower(0x0416) == 0x0436);  // Ж
  CHECK(unicode::to_lower(0x03A3) == 0x03C3);  // Σ
  CHECK(unicode::to_lower(U'1') == U'1');
  CHECK(unicode::to_lower(0x1F44D) == 0x1F44D);
}

TEST_CASE("punctuation categories") {
  for (char32_t cp : std::u32string(U"!\"#%&'()*,-./:;?@[\\]_{}")) CHECK(unicode::is_punctuation(cp));
  CHECK(unicode::is_punctuation(0x2014));  // em dash, Pd
  CHECK(unicode::is_punctuation(0x00BF));  // inverted question mark, Po
  CHECK(unicode::is_punctuation(0x300C));  // corner bracket, Ps
  // Symbols are not punctuation.
  CHECK_FALSE(unicode::is_punctuation(U'$'));
  CHECK_FALSE(unicode::is_punctuation(U'+'));
  CHECK_FALSE(unicode::is_punctuation(U'='));
  CHECK_FALSE(unicode::is_punctuation(U'a'));
  CHECK_FALSE(unicode::is_punctuation(U' '));
}

TEST_CASE("whitespace") {
  for (char32_t cp : {0x09, 0x0A, 0x0D, 0x20, 0x85, 0xA0, 0x2003, 0x3000}) CHECK(unicode::is_whitespace(cp));
  CHECK_FALSE(unicode::is_whitespace(U'a'));
  CHECK_FALSE(unicode::is_whitespace(0x200B));
  CHECK(unicode::is_blank(" \t\xE3\x80\x80"));
  CHECK(unicode::is_blank(""));
  CHECK_FALSE(unicode::is_blank(" x "));
}

TEST_CASE("character stages are idempotent over random text") {
  Rng rng(17);
  for (int i = 0; i < 3000; ++i) {
    const auto s = random_text(rng);
    const auto f = text::case_fold(s);
    CHECK(text::case_fold(f) == f);
    const auto p = text::strip_punctuation(s);
    CHECK(text::strip_punctuation(p) == p);
    const auto e = text::strip_emoji(s);
    CHECK(text::strip_emoji(e) == e);
  }
}

TEST_CASE("character stages are idempotent over random bytes") {
  Rng rng(23);
  for (int i = 0; i < 2000; ++i) {
    const auto s = random_bytes(rng);
    const auto f = text::case_fold(s);
    CHECK(text::case_fold(f) == f);
    const auto p = text::strip_punctuation(s);
    CHECK(text::strip_punctuation(p) == p);
    const auto e = text::strip_emoji(s);
    CHECK(text::strip_emoji(e) == e);
  }
}

TEST_CASE("tokens never contain whitespace and are never empty") {
  Rng rng(29);
  for (int i = 0; i < 2000; ++i) {
    for (const auto& t : text::tokenize(random_text(rng))) {
      CHECK_FALSE(t.empty());
      for (char32_t cp : unicode::decode_utf8(t)) CHECK_FALSE(unicode::is_whitespace(cp));
    }
  }
}
