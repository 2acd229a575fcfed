#include <doctest.h>

#include <set>

#include "test_support.hpp"
#include "vta/assistant.hpp"
#include "vta/error.hpp"

using namespace vta;

namespace {

const Assistant& bundled() {
  static const Assistant a = Assistant::from_corpus(
      nn::load_model_file(vta::testing::data_path("sample_model.json")), vta::testing::sample_corpus());
  return a;
}

std::string random_message(Rng& rng) {
  static const char* const pieces[] = {"loop",  "what", "is",  "a", "list", "?",   "\xF0\x9F\x98\x80", "def",
                                       "caf\xC3\xA9", "  ", "\xFF", "IF", "\xE2\x80\x94", "dictionary", "x", "\t"};
  std::string s;
  const auto n = rng.uniform_index(12);
  for (std::size_t i = 0; i < n; ++i) {
    s += pieces[rng.uniform_index(std::size(pieces))];
    if (rng.uniform_index(2)) s += ' ';
  }
  return s;
}

}  // namespace

TEST_CASE("verbatim training patterns map to their own tag") {
  const auto& a = bundled();
  for (const auto& e : vta::testing::sample_corpus().intents) {
    for (const auto& p : e.patterns) {
      CAPTURE(p);
      const auto r = a.predict_intent(p);
      CHECK(r.tag == e.tag);
      CHECK(r.confidence >= 0.9);
      const auto reply = a.respond(p, 1);
      REQUIRE(reply.intent.has_value());
      CHECK(*reply.intent == e.tag);
      CHECK(std::find(e.responses.begin(), e.responses.end(), reply.response) != e.responses.end());
    }
  }
}

TEST_CASE("empty and out-of-vocabulary input go through the zero vector") {
  const auto& a = bundled();
  const auto zero = nn::forward(a.model().params, BowVector(a.model().vocabulary.size(), 0));
  const double p0 = *std::max_element(zero.probs.begin(), zero.probs.end());
  for (const char* s : {"", "   ", "zzzz qqqq", "\xF0\x9F\x98\x80", "the a an"}) {
    CAPTURE(s);
    CHECK(a.predict_intent(s).confidence == p0);
  }
  // With no evidence the bundled model stays below its threshold.
  const auto r = a.respond("");
  CHECK(r.is_fallback);
  CHECK_FALSE(r.intent.has_value());
  CHECK(r.response == kFallbackMessage);
}

TEST_CASE("fallback invariants over random input") {
  const auto& a = bundled();
  const double k = static_cast<double>(a.labels().size());
  Rng rng(31);
  for (int i = 0; i < 1500; ++i) {
    const auto msg = random_message(rng);
    const auto r = a.respond(msg, rng.next());
    CHECK(r.confidence >= 1.0 / k - 1e-12);
    CHECK(r.confidence <= 1.0);
    CHECK(r.is_fallback == !r.intent.has_value());
    CHECK(r.is_fallback == (r.confidence < a.threshold()));
    if (r.is_fallback) {
      CHECK(r.response == a.fallback_message());
    } else {
      const auto* e = vta::testing::sample_corpus().find(*r.intent);
      REQUIRE(e != nullptr);
      CHECK(std::find(e->responses.begin(), e->responses.end(), r.response) != e->responses.end());
    }
  }
}

TEST_CASE("seeded replies are reproducible") {
  const auto& a = bundled();
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    CHECK(a.respond("what is a loop", seed) == a.respond("what is a loop", seed));
  }
}

TEST_CASE("response choice covers every option") {
  auto c = vta::testing::make_corpus({{"a", {"loop one", "loop two"}}, {"b", {"list one", "list two"}}});
  c.intents[0].responses = {"r1", "r2", "r3"};
  const auto d = encode_dataset(c, text::PipelineConfig::defaults());
  nn::TrainConfig t;
  t.epochs = 300;
  t.learning_rate = 0.01;
  nn::ModelFile m{nn::train(d, {d.vocabulary.size(), 8, 2}, t).params, d.vocabulary, d.label_names, 0.6};
  const auto a = Assistant::from_corpus(m, c);
  std::map<std::string, int> seen;
  for (std::uint64_t seed = 0; seed < 600; ++seed) {
    const auto r = a.respond("loop one", seed);
    REQUIRE_FALSE(r.is_fallback);
    ++seen[r.response];
  }
  CHECK(seen.size() == 3);
  for (const auto& [resp, n] : seen) CHECK(n > 120);
  std::set<std::string> unseeded;
  for (int i = 0; i < 200; ++i) unseeded.insert(a.respond("loop one").response);
  CHECK(unseeded.size() == 3);
}

TEST_CASE("raising the threshold never turns a fallback into an answer") {
  Rng rng(41);
  std::vector<std::string> msgs;
  for (int i = 0; i < 300; ++i) msgs.push_back(random_message(rng));
  for (const auto& e : vta::testing::sample_corpus().intents) msgs.push_back(e.patterns.front());
  std::vector<double> ts = {0.05, 0.2, 0.35, 0.5, 0.75, 0.9, 0.99, 0.999999};
  for (const auto& m : msgs) {
    bool fell_back = false;
    for (double t : ts) {
      const bool f = bundled().with_threshold(t).respond(m, 0).is_fallback;
      if (fell_back) CHECK(f);
      fell_back = f;
    }
  }
}

TEST_CASE("uniform logit shift leaves predictions unchanged") {
  auto m = bundled().model();
  for (auto& b : m.params.b3) b += 37.5;
  const auto shifted = Assistant::from_corpus(m, vta::testing::sample_corpus());
  Rng rng(43);
  for (int i = 0; i < 300; ++i) {
    const auto msg = random_message(rng);
    const auto a = bundled().predict_intent(msg);
    const auto b = shifted.predict_intent(msg);
    CHECK(a.tag == b.tag);
    CHECK(a.confidence == doctest::Approx(b.confidence).epsilon(1e-9));
  }
}

TEST_CASE("assistant construction errors") {
  auto m = bundled().model();
  auto c = vta::testing::sample_corpus();
  c.intents.pop_back();
  CHECK_THROWS_AS(Assistant::from_corpus(m, c), PreconditionError);
  c = vta::testing::sample_corpus();
  c.intents.front().responses.clear();
  CHECK_THROWS_AS(Assistant::from_corpus(m, c), PreconditionError);
  CHECK_THROWS_AS(bundled().with_threshold(0.0), PreconditionError);
  CHECK_THROWS_AS(bundled().with_threshold(1.0), PreconditionError);
  CHECK_NOTHROW(bundled().with_threshold(0.5));
}

TEST_CASE("custom fallback message") {
  const auto& base = bundled();
  std::map<std::string, std::vector<std::string>, std::less<>> responses;
  for (const auto& e : vta::testing::sample_corpus().intents) responses[e.tag] = e.responses;
  const Assistant a(base.model(), responses, text::PipelineConfig::defaults(), "pardon?");
  CHECK(a.respond("").response == "pardon?");
}
