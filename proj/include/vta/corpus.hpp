#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace vta {

/// One tag of the intents corpus: the example questions that share an intent
/// and the canned answers for it.
struct IntentEntry {
  std::string tag;
  std::string topic = "general";
  std::vector<std::string> patterns;
  std::vector<std::string> responses;

  bool operator==(const IntentEntry&) const = default;
};

/// Flat list of intents. The intent -> topic -> tag hierarchy is recovered by
/// grouping on IntentEntry::topic.
struct Corpus {
  std::vector<IntentEntry> intents;

  std::size_t pattern_count() const noexcept;
  const IntentEntry* find(std::string_view tag) const noexcept;
  std::vector<std::string> tags() const;

  bool operator==(const Corpus&) const = default;
};

struct LoadReport {
  std::size_t rows_seen = 0;
  std::size_t rows_kept = 0;
  /// One human-readable line per dropped row.
  std::vector<std::string> dropped;
};

struct LoadResult {
  Corpus corpus;
  LoadReport report;
};

/// Parses the JSON corpus format. Rows whose tag is null/empty, or whose
/// pattern or response list is null, empty or contains nulls, are dropped and
/// recorded in the report.
///
/// Throws ParseError on malformed JSON (with line/column), on schema
/// violations and on unknown keys; EmptyCorpusError when no row survives.
LoadResult load_corpus(std::string_view text);
LoadResult load_corpus(std::istream& in);
LoadResult load_corpus_file(const std::filesystem::path& path);

/// Canonical JSON encoding; load_corpus(serialize_corpus(c)).corpus == c.
std::string serialize_corpus(const Corpus& corpus);

enum class ViolationKind {
  empty_tag,
  duplicate_tag,
  no_patterns,
  no_responses,
  empty_pattern,
  empty_response,
  duplicate_pattern,
  cross_tag_duplicate,
};

std::string_view to_string(ViolationKind kind) noexcept;

struct Violation {
  ViolationKind kind;
  std::string tag;
  std::size_t intent_index = 0;
  /// Pattern or response index inside the intent, when the breach has one.
  std::optional<std::size_t> item_index;
  std::string detail;

  std::string describe() const;
  bool operator==(const Violation&) const = default;
};

/// Every invariant breach in the corpus; empty iff the corpus is clean.
std::vector<Violation> validate(const Corpus& corpus);

struct HistogramBucket {
  std::string_view label;
  std::size_t tags = 0;
  double percent = 0.0;
};

struct DatasetStats {
  std::size_t tag_count = 0;
  std::size_t pattern_count = 0;
  std::size_t unique_response_count = 0;
  /// Buckets {<=2, 3, 4, 5-10, >10} of patterns per tag, as percent of tags.
  std::array<HistogramBucket, 5> patterns_per_tag_histogram{};
  double mean_patterns_per_tag = 0.0;
};

DatasetStats stats(const Corpus& corpus);

/// Keeps the intents with at least min_patterns patterns, in order.
/// Throws PreconditionError for min_patterns == 0 and EmptyCorpusError when
/// nothing survives.
Corpus refactor(const Corpus& corpus, std::size_t min_patterns);

/// A single pattern with the index of its tag in SplitPair::label_names.
struct Example {
  std::string text;
  std::size_t label = 0;

  bool operator==(const Example&) const = default;
};

struct SplitPair {
  std::vector<Example> train;
  std::vector<Example> test;
  /// Tag order of the source corpus.
  std::vector<std::string> label_names;
  std::uint64_t seed = 0;
  /// Tags with fewer than two patterns; they contribute to train only.
  std::vector<std::string> train_only_tags;

  bool operator==(const SplitPair&) const = default;
};

/// Stratified hold-out: each tag with n patterns sends
/// min(round(test_fraction * n), n - 1) of them to test. Deterministic in seed.
/// Throws PreconditionError unless 0 < test_fraction < 1.
SplitPair split(const Corpus& corpus, double test_fraction, std::uint64_t seed);

/// All patterns of the corpus labelled by tag position.
std::vector<Example> all_examples(const Corpus& corpus);

}  // namespace vta
