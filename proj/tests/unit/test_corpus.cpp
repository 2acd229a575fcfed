#include <doctest.h>

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "test_support.hpp"
#include "vta/error.hpp"

using namespace vta;
using vta::testing::make_corpus;
using vta::testing::sized_corpus;

TEST_CASE("load: single intent") {
  const auto r = load_corpus(R"({"intents":[{"tag":"greetings","patterns":["hi"],"responses":["Hello!"]}]})");
  REQUIRE(r.corpus.intents.size() == 1);
  CHECK(r.corpus.intents[0].tag == "greetings");
  CHECK(r.corpus.intents[0].topic == "general");
  CHECK(r.corpus.intents[0].patterns == std::vector<std::string>{"hi"});
  CHECK(r.report.rows_seen == 1);
  CHECK(r.report.rows_kept == 1);
  CHECK(r.report.dropped.empty());
}

TEST_CASE("load: rows with null fields are dropped and reported") {
  const auto r = load_corpus(R"({"intents":[
    {"tag":"a","patterns":["x"],"responses":["y"]},
    {"tag":"b","patterns":null,"responses":["y"]},
    {"tag":"c","topic":"loops","patterns":["z"],"responses":["w"]}]})");
  CHECK(r.corpus.tags() == std::vector<std::string>{"a", "c"});
  CHECK(r.corpus.intents[1].topic == "loops");
  CHECK(r.report.rows_seen == 3);
  CHECK(r.report.rows_kept == 2);
  CHECK(r.report.dropped.size() == 1);
}

TEST_CASE("load: other drop rules") {
  const auto r = load_corpus(R"({"intents":[
    {"tag":null,"patterns":["x"],"responses":["y"]},
    {"tag":"","patterns":["x"],"responses":["y"]},
    {"tag":"e","patterns":[],"responses":["y"]},
    {"tag":"f","patterns":["x"],"responses":[]},
    {"tag":"g","patterns":["x",null],"responses":["y"]},
    {"tag":"h","patterns":["x"],"responses":null},
    null,
    {"tag":"ok","patterns":["x"],"responses":["y"]}]})");
  CHECK(r.corpus.tags() == std::vector<std::string>{"ok"});
  CHECK(r.report.rows_seen == 8);
  CHECK(r.report.rows_kept == 1);
  CHECK(r.report.dropped.size() == 7);
}

TEST_CASE("load: malformed json carries a position") {
  try {
    load_corpus("{\"intents\": [\n  {\"tag\": \"a\",, }\n]}");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
    CHECK(e.column() > 0);
  }
}

TEST_CASE("load: schema errors") {
  CHECK_THROWS_AS(load_corpus("[]"), ParseError);
  CHECK_THROWS_AS(load_corpus("{}"), ParseError);
  CHECK_THROWS_AS(load_corpus(R"({"intents":{}})"), ParseError);
  CHECK_THROWS_AS(load_corpus(R"({"intents":[{"tag":3,"patterns":["x"],"responses":["y"]}]})"), ParseError);
  CHECK_THROWS_AS(load_corpus(R"({"intents":[{"tag":"a","patterns":[1],"responses":["y"]}]})"), ParseError);
}

TEST_CASE("load: unknown keys are named") {
  try {
    load_corpus(R"({"intents":[{"tag":"a","patterns":["x"],"responses":["y"],"context":[]}]})");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("context") != std::string::npos);
  }
  try {
    load_corpus(R"({"intents":[],"version":2})");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("version") != std::string::npos);
  }
}

TEST_CASE("load: nothing survives") {
  CHECK_THROWS_AS(load_corpus(R"({"intents":[]})"), EmptyCorpusError);
  CHECK_THROWS_AS(load_corpus(R"({"intents":[{"tag":"a","patterns":[],"responses":["y"]}]})"), EmptyCorpusError);
}

TEST_CASE("load: missing file") {
  try {
    load_corpus_file("/nonexistent/corpus.json");
    FAIL("expected Error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("no such file") != std::string::npos);
  }
}

TEST_CASE("serialize round trip") {
  const auto& c = vta::testing::sample_corpus();
  const auto text = serialize_corpus(c);
  CHECK(load_corpus(text).corpus == c);
  CHECK(serialize_corpus(load_corpus(text).corpus) == text);

  Corpus odd = make_corpus({{"uni", {"caf\xC3\xA9 \xF0\x9F\x91\x8D", "tab\there", "quote \" and \\"}}});
  odd.intents[0].topic = "t\xC3\xB6pic";
  CHECK(load_corpus(serialize_corpus(odd)).corpus == odd);

  std::istringstream in(text);
  CHECK(load_corpus(in).corpus == c);
}

TEST_CASE("validate: clean corpus") {
  CHECK(validate(make_corpus({{"a", {"x", "y"}}, {"b", {"z"}}})).empty());
  CHECK(validate(vta::testing::sample_corpus()).empty());
}

TEST_CASE("validate: duplicate tag") {
  const auto v = validate(make_corpus({{"loop", {"x"}}, {"loop", {"y"}}}));
  REQUIRE(v.size() == 1);
  CHECK(v[0].kind == ViolationKind::duplicate_tag);
  CHECK(v[0].tag == "loop");
  CHECK(v[0].intent_index == 1);
  CHECK(to_string(v[0].kind) == "DuplicateTag");
}

TEST_CASE("validate: cross-tag duplicate") {
  const auto v = validate(make_corpus({{"list", {"what is a list"}}, {"tuple", {"what is a list", "tuple?"}}}));
  REQUIRE(v.size() == 1);
  CHECK(v[0].kind == ViolationKind::cross_tag_duplicate);
  CHECK(v[0].tag == "tuple");
  CHECK(v[0].item_index == 0);
  CHECK(to_string(v[0].kind) == "CrossTagDuplicate");
  CHECK(v[0].describe().find("what is a list") != std::string::npos);
}

TEST_CASE("validate: in-entry problems") {
  Corpus c = make_corpus({{"a", {"x", "x", "  "}}, {"", {"q"}}});
  c.intents[0].responses.push_back("\t");
  c.intents.push_back({"n", "general", {}, {}});
  const auto v = validate(c);
  std::multiset<ViolationKind> kinds;
  for (const auto& x : v) kinds.insert(x.kind);
  CHECK(kinds.count(ViolationKind::duplicate_pattern) == 1);
  CHECK(kinds.count(ViolationKind::empty_pattern) == 1);
  CHECK(kinds.count(ViolationKind::empty_response) == 1);
  CHECK(kinds.count(ViolationKind::empty_tag) == 1);
  CHECK(kinds.count(ViolationKind::no_patterns) == 1);
  CHECK(kinds.count(ViolationKind::no_responses) == 1);
}

TEST_CASE("stats: sizes 2,3,4") {
  const auto s = stats(sized_corpus({2, 3, 4}));
  CHECK(s.tag_count == 3);
  CHECK(s.pattern_count == 9);
  CHECK(s.unique_response_count == 3);
  CHECK(s.mean_patterns_per_tag == doctest::Approx(3.0));
  const auto& h = s.patterns_per_tag_histogram;
  CHECK(h[0].label == "<=2");
  CHECK(h[0].percent == doctest::Approx(100.0 / 3).epsilon(1e-9));
  CHECK(h[1].percent == doctest::Approx(100.0 / 3).epsilon(1e-9));
  CHECK(h[2].percent == doctest::Approx(100.0 / 3).epsilon(1e-9));
  CHECK(h[3].percent == 0.0);
  CHECK(h[4].percent == 0.0);
}

TEST_CASE("stats: single tag single pattern") {
  const auto s = stats(sized_corpus({1}));
  CHECK(s.tag_count == 1);
  CHECK(s.pattern_count == 1);
  CHECK(s.patterns_per_tag_histogram[0].percent == 100.0);
}

TEST_CASE("stats: bucket edges and shared responses") {
  Corpus c = sized_corpus({5, 10, 11, 3});
  c.intents[1].responses = c.intents[0].responses;
  const auto s = stats(c);
  CHECK(s.unique_response_count == 3);
  const auto& h = s.patterns_per_tag_histogram;
  CHECK(h[1].tags == 1);
  CHECK(h[3].tags == 2);
  CHECK(h[4].tags == 1);
}

TEST_CASE("stats: percentages sum to 100 over random corpora") {
  Rng rng(11);
  for (int i = 0; i < 200; ++i) {
    const auto s = stats(vta::testing::random_corpus(rng));
    double sum = 0;
    std::size_t tags = 0;
    for (const auto& b : s.patterns_per_tag_histogram) {
      sum += b.percent;
      tags += b.tags;
    }
    CHECK(sum == doctest::Approx(100.0).epsilon(0.001));
    CHECK(tags == s.tag_count);
  }
}

TEST_CASE("refactor: direct filter") {
  const auto r = refactor(sized_corpus({5, 12, 10}), 10);
  REQUIRE(r.intents.size() == 2);
  CHECK(r.intents[0].patterns.size() == 12);
  CHECK(r.intents[1].patterns.size() == 10);
  CHECK(r.intents[0].tag == "t1");
}

TEST_CASE("refactor: threshold 1 is identity") {
  const auto& c = vta::testing::sample_corpus();
  CHECK(refactor(c, 1) == c);
}

TEST_CASE("refactor: bundled corpus at 10 matches a direct count") {
  const auto& c = vta::testing::sample_corpus();
  std::vector<std::string> expected;
  for (const auto& e : c.intents) {
    if (e.patterns.size() >= 10) expected.push_back(e.tag);
  }
  CHECK(refactor(c, 10).tags() == expected);
  CHECK(expected == std::vector<std::string>{"loop", "list", "dictionary", "string", "variable", "function"});
}

TEST_CASE("refactor: errors") {
  CHECK_THROWS_AS(refactor(sized_corpus({3}), 0), PreconditionError);
  try {
    refactor(sized_corpus({3, 4}), 50);
    FAIL("expected EmptyCorpusError");
  } catch (const EmptyCorpusError& e) {
    CHECK(std::string(e.what()).find("50") != std::string::npos);
  }
}

TEST_CASE("refactor: composition over fuzzed corpora") {
  Rng rng(2024);
  for (int i = 0; i < 200; ++i) {
    const auto c = vta::testing::random_corpus(rng);
    const std::size_t a = 1 + rng.uniform_index(8);
    const std::size_t b = 1 + rng.uniform_index(8);
    std::optional<Corpus> once;
    try {
      once = refactor(c, std::max(a, b));
    } catch (const EmptyCorpusError&) {
    }
    if (!once) {
      CHECK_THROWS_AS(refactor(refactor(c, a), b), EmptyCorpusError);
    } else {
      CHECK(refactor(refactor(c, a), b) == *once);
    }
  }
}

TEST_CASE("split: per-tag arithmetic") {
  const auto s = split(sized_corpus({10}), 0.2, 7);
  CHECK(s.test.size() == 2);
  CHECK(s.train.size() == 8);
  CHECK(s.seed == 7);
  CHECK(s.train_only_tags.empty());
}

TEST_CASE("split: deterministic") {
  const auto& c = vta::testing::sample_corpus();
  CHECK(split(c, 0.2, 42) == split(c, 0.2, 42));
  CHECK_FALSE(split(c, 0.2, 42).test == split(c, 0.2, 43).test);
}

TEST_CASE("split: single-pattern tag stays in train and is flagged") {
  const auto s = split(sized_corpus({1, 4}), 0.5, 3);
  CHECK(s.train_only_tags == std::vector<std::string>{"t0"});
  CHECK(std::count_if(s.train.begin(), s.train.end(), [](const Example& e) { return e.label == 0; }) == 1);
  CHECK(s.test.size() == 2);
}

TEST_CASE("split: at least one pattern stays in train") {
  const auto s = split(sized_corpus({2, 3}), 0.9, 1);
  CHECK(s.test.size() == 1 + 2);
  CHECK(s.train.size() == 2);
}

TEST_CASE("split: bad fraction") {
  const auto c = sized_corpus({4});
  CHECK_THROWS_AS(split(c, 0.0, 1), PreconditionError);
  CHECK_THROWS_AS(split(c, 1.0, 1), PreconditionError);
  CHECK_THROWS_AS(split(c, -0.5, 1), PreconditionError);
}

TEST_CASE("split: partition over fuzzed corpora") {
  Rng rng(99);
  for (int i = 0; i < 200; ++i) {
    const auto c = vta::testing::random_corpus(rng);
    const double frac = 0.05 + 0.9 * rng.uniform_real();
    const auto s = split(c, frac, rng.next());
    CHECK(s.train.size() + s.test.size() == c.pattern_count());
    std::multiset<std::pair<std::size_t, std::string>> seen;
    for (const auto& e : s.train) seen.emplace(e.label, e.text);
    for (const auto& e : s.test) seen.emplace(e.label, e.text);
    std::multiset<std::pair<std::size_t, std::string>> all;
    for (const auto& e : all_examples(c)) all.emplace(e.label, e.text);
    CHECK(seen == all);
    std::set<std::size_t> train_labels;
    for (const auto& e : s.train) train_labels.insert(e.label);
    for (const auto& e : s.test) CHECK(train_labels.count(e.label) == 1);
  }
}

TEST_CASE("all_examples labels follow tag order") {
  const auto ex = all_examples(sized_corpus({2, 1}));
  REQUIRE(ex.size() == 3);
  CHECK(ex[0].label == 0);
  CHECK(ex[1].label == 0);
  CHECK(ex[2].label == 1);
  CHECK(ex[2].text == "question 1 number 0");
}

TEST_CASE("corpus lookups") {
  const auto c = sized_corpus({2, 3});
  CHECK(c.pattern_count() == 5);
  REQUIRE(c.find("t1") != nullptr);
  CHECK(c.find("t1")->patterns.size() == 3);
  CHECK(c.find("missing") == nullptr);
}
