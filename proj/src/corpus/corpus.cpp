#include "vta/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iterator>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "json.hpp"
#include "vta/error.hpp"
#include "vta/rng.hpp"
#include "vta/unicode.hpp"

namespace vta {
namespace {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

std::pair<std::size_t, std::size_t> line_and_column(std::string_view text, std::size_t byte) {
  byte = std::min(byte, text.size());
  std::size_t line = 1;
  std::size_t column = 1;
  for (std::size_t i = 0; i < byte; ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return {line, column};
}

std::string row_label(std::size_t row) { return "intents[" + std::to_string(row) + "]"; }

// Returns nullopt when the list is null, empty, or holds a null element: the
// row is then dropped rather than rejected.
std::optional<std::vector<std::string>> read_string_list(const json& value, const std::string& where) {
  if (value.is_null()) return std::nullopt;
  if (!value.is_array()) throw ParseError(where + ": expected an array of strings");
  std::vector<std::string> out;
  out.reserve(value.size());
  for (const auto& item : value) {
    if (item.is_null()) return std::nullopt;
    if (!item.is_string()) throw ParseError(where + ": expected an array of strings");
    out.push_back(item.get<std::string>());
  }
  if (out.empty()) return std::nullopt;
  return out;
}

}  // namespace

std::size_t Corpus::pattern_count() const noexcept {
  std::size_t n = 0;
  for (const auto& intent : intents) n += intent.patterns.size();
  return n;
}

const IntentEntry* Corpus::find(std::string_view tag) const noexcept {
  for (const auto& intent : intents) {
    if (intent.tag == tag) return &intent;
  }
  return nullptr;
}

std::vector<std::string> Corpus::tags() const {
  std::vector<std::string> out;
  out.reserve(intents.size());
  for (const auto& intent : intents) out.push_back(intent.tag);
  return out;
}

LoadResult load_corpus(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    const auto [line, column] = line_and_column(text, e.byte == 0 ? 0 : e.byte - 1);
    throw ParseError("malformed corpus JSON at line " + std::to_string(line) + ", column " +
                         std::to_string(column) + ": " + e.what(),
                     line, column);
  }

  if (!doc.is_object()) throw ParseError("corpus document must be a JSON object");
  for (const auto& [key, value] : doc.items()) {
    if (key != "intents") throw ParseError("unknown key '" + key + "' in corpus document");
  }
  const auto it = doc.find("intents");
  if (it == doc.end()) throw ParseError("missing key 'intents'");
  if (!it->is_array()) throw ParseError("'intents' must be an array");

  LoadResult result;
  auto& report = result.report;
  for (std::size_t row = 0; row < it->size(); ++row) {
    const json& entry = (*it)[row];
    const std::string where = row_label(row);
    ++report.rows_seen;
    if (entry.is_null()) {
      report.dropped.push_back(where + ": null row");
      continue;
    }
    if (!entry.is_object()) throw ParseError(where + ": expected an object");
    for (const auto& [key, value] : entry.items()) {
      if (key != "tag" && key != "topic" && key != "patterns" && key != "responses") {
        throw ParseError("unknown key '" + key + "' in " + where);
      }
    }

    IntentEntry intent;
    const auto tag = entry.find("tag");
    if (tag == entry.end() || tag->is_null()) {
      report.dropped.push_back(where + ": null tag");
      continue;
    }
    if (!tag->is_string()) throw ParseError(where + ".tag: expected a string");
    intent.tag = tag->get<std::string>();
    if (intent.tag.empty()) {
      report.dropped.push_back(where + ": empty tag");
      continue;
    }

    if (const auto topic = entry.find("topic"); topic != entry.end() && !topic->is_null()) {
      if (!topic->is_string()) throw ParseError(where + ".topic: expected a string");
      intent.topic = topic->get<std::string>();
    }

    const auto patterns = entry.find("patterns");
    auto pattern_list = patterns == entry.end() ? std::nullopt
                                                : read_string_list(*patterns, where + ".patterns");
    const auto responses = entry.find("responses");
    auto response_list = responses == entry.end()
                             ? std::nullopt
                             : read_string_list(*responses, where + ".responses");
    if (!pattern_list) {
      report.dropped.push_back(where + " ('" + intent.tag + "'): null or empty patterns");
      continue;
    }
    if (!response_list) {
      report.dropped.push_back(where + " ('" + intent.tag + "'): null or empty responses");
      continue;
    }
    intent.patterns = std::move(*pattern_list);
    intent.responses = std::move(*response_list);
    result.corpus.intents.push_back(std::move(intent));
    ++report.rows_kept;
  }

  if (result.corpus.intents.empty()) {
    throw EmptyCorpusError("corpus has no usable intents (" + std::to_string(report.rows_seen) +
                           " rows seen, 0 kept)");
  }
  return result;
}

LoadResult load_corpus(std::istream& in) {
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return load_corpus(buffer.str());
}

LoadResult load_corpus_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("no such file: " + path.string());
  return load_corpus(in);
}

std::string serialize_corpus(const Corpus& corpus) {
  ordered_json intents = ordered_json::array();
  for (const auto& intent : corpus.intents) {
    ordered_json entry;
    entry["tag"] = intent.tag;
    entry["topic"] = intent.topic;
    entry["patterns"] = intent.patterns;
    entry["responses"] = intent.responses;
    intents.push_back(std::move(entry));
  }
  ordered_json doc;
  doc["intents"] = std::move(intents);
  return doc.dump(2) + "\n";
}

std::string_view to_string(ViolationKind kind) noexcept {
  switch (kind) {
    case ViolationKind::empty_tag: return "EmptyTag";
    case ViolationKind::duplicate_tag: return "DuplicateTag";
    case ViolationKind::no_patterns: return "NoPatterns";
    case ViolationKind::no_responses: return "NoResponses";
    case ViolationKind::empty_pattern: return "EmptyPattern";
    case ViolationKind::empty_response: return "EmptyResponse";
    case ViolationKind::duplicate_pattern: return "DuplicatePattern";
    case ViolationKind::cross_tag_duplicate: return "CrossTagDuplicate";
  }
  return "Unknown";
}

std::string Violation::describe() const {
  std::string out(to_string(kind));
  out += "('" + tag + "') at intents[" + std::to_string(intent_index) + "]";
  if (item_index) out += "[" + std::to_string(*item_index) + "]";
  if (!detail.empty()) out += ": " + detail;
  return out;
}

std::vector<Violation> validate(const Corpus& corpus) {
  std::vector<Violation> out;
  std::map<std::string, std::size_t> first_tag;
  std::map<std::string, std::size_t> pattern_owner;

  for (std::size_t i = 0; i < corpus.intents.size(); ++i) {
    const auto& intent = corpus.intents[i];
    if (unicode::is_blank(intent.tag)) {
      out.push_back({ViolationKind::empty_tag, intent.tag, i, std::nullopt, {}});
    }
    if (auto [pos, inserted] = first_tag.emplace(intent.tag, i); !inserted) {
      out.push_back({ViolationKind::duplicate_tag, intent.tag, i, std::nullopt,
                     "first defined at intents[" + std::to_string(pos->second) + "]"});
    }
    if (intent.patterns.empty()) out.push_back({ViolationKind::no_patterns, intent.tag, i, std::nullopt, {}});
    if (intent.responses.empty()) out.push_back({ViolationKind::no_responses, intent.tag, i, std::nullopt, {}});

    std::set<std::string_view> seen_here;
    for (std::size_t p = 0; p < intent.patterns.size(); ++p) {
      const auto& pattern = intent.patterns[p];
      if (unicode::is_blank(pattern)) {
        out.push_back({ViolationKind::empty_pattern, intent.tag, i, p, {}});
        continue;
      }
      if (!seen_here.insert(pattern).second) {
        out.push_back({ViolationKind::duplicate_pattern, intent.tag, i, p, "'" + pattern + "'"});
        continue;
      }
      const auto [owner, inserted] = pattern_owner.emplace(pattern, i);
      if (!inserted && owner->second != i) {
        out.push_back({ViolationKind::cross_tag_duplicate, intent.tag, i, p,
                       "'" + pattern + "' also under '" + corpus.intents[owner->second].tag + "'"});
      }
    }
    for (std::size_t r = 0; r < intent.responses.size(); ++r) {
      if (unicode::is_blank(intent.responses[r])) {
        out.push_back({ViolationKind::empty_response, intent.tag, i, r, {}});
      }
    }
  }
  return out;
}

DatasetStats stats(const Corpus& corpus) {
  DatasetStats s;
  s.patterns_per_tag_histogram = {{{"<=2"}, {"3"}, {"4"}, {"5-10"}, {">10"}}};
  std::set<std::string_view> responses;
  for (const auto& intent : corpus.intents) {
    const std::size_t n = intent.patterns.size();
    s.pattern_count += n;
    const std::size_t bucket = n <= 2 ? 0 : n == 3 ? 1 : n == 4 ? 2 : n <= 10 ? 3 : 4;
    ++s.patterns_per_tag_histogram[bucket].tags;
    for (const auto& r : intent.responses) responses.insert(r);
  }
  s.tag_count = corpus.intents.size();
  s.unique_response_count = responses.size();
  if (s.tag_count > 0) {
    for (auto& bucket : s.patterns_per_tag_histogram) {
      bucket.percent = 100.0 * static_cast<double>(bucket.tags) / static_cast<double>(s.tag_count);
    }
    s.mean_patterns_per_tag = static_cast<double>(s.pattern_count) / static_cast<double>(s.tag_count);
  }
  return s;
}

Corpus refactor(const Corpus& corpus, std::size_t min_patterns) {
  if (min_patterns == 0) throw PreconditionError("refactor threshold must be >= 1");
  Corpus out;
  std::copy_if(corpus.intents.begin(), corpus.intents.end(), std::back_inserter(out.intents),
               [&](const IntentEntry& e) { return e.patterns.size() >= min_patterns; });
  if (out.intents.empty()) {
    throw EmptyCorpusError("refactor threshold " + std::to_string(min_patterns) +
                           " removes every intent");
  }
  return out;
}

SplitPair split(const Corpus& corpus, double test_fraction, std::uint64_t seed) {
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
    throw PreconditionError("test fraction must lie in (0, 1), got " + std::to_string(test_fraction));
  }
  SplitPair out;
  out.seed = seed;
  out.label_names = corpus.tags();
  Rng rng(seed);
  for (std::size_t label = 0; label < corpus.intents.size(); ++label) {
    const auto& patterns = corpus.intents[label].patterns;
    const std::size_t n = patterns.size();
    std::vector<bool> to_test(n, false);
    if (n < 2) {
      out.train_only_tags.push_back(corpus.intents[label].tag);
    } else {
      const auto wanted = static_cast<std::size_t>(std::llround(test_fraction * static_cast<double>(n)));
      const std::size_t k = std::min(wanted, n - 1);
      std::vector<std::size_t> order(n);
      std::iota(order.begin(), order.end(), std::size_t{0});
      rng.shuffle(std::span(order));
      for (std::size_t j = 0; j < k; ++j) to_test[order[j]] = true;
    }
    for (std::size_t p = 0; p < n; ++p) {
      (to_test[p] ? out.test : out.train).push_back({patterns[p], label});
    }
  }
  return out;
}

std::vector<Example> all_examples(const Corpus& corpus) {
  std::vector<Example> out;
  out.reserve(corpus.pattern_count());
  for (std::size_t label = 0; label < corpus.intents.size(); ++label) {
    for (const auto& p : corpus.intents[label].patterns) out.push_back({p, label});
  }
  return out;
}

}  // namespace vta
