#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "vta/corpus.hpp"
#include "vta/exec.hpp"
#include "vta/unicode.hpp"

namespace vta {

namespace text {

/// Toggles and word lists for preprocess(). Case folding always runs.
struct PipelineConfig {
  std::set<std::string, std::less<>> stopwords;
  /// Exempt from stopword removal even when listed in stopwords.
  std::set<std::string, std::less<>> keep_words;
  bool strip_emoji = true;
  bool strip_punctuation = true;
  bool stem = true;

  /// Bundled stopword list, Python-keyword keep list, every stage enabled.
  static PipelineConfig defaults();
  /// No stopwords, no emoji or punctuation stripping, no stemming.
  static PipelineConfig disabled();

  bool removes(std::string_view token) const;
};

/// Bundled English stopword snapshot (data/stopwords_en.txt).
const std::set<std::string, std::less<>>& default_stopwords();
/// Python keywords that standard stoplists would otherwise delete.
const std::set<std::string, std::less<>>& default_keep_words();
/// Sorted emoji/pictograph ranges (data/emoji_ranges.txt).
std::span<const unicode::CodePointRange> emoji_ranges();

/// Parses the plain-text list formats used by the data files.
std::set<std::string, std::less<>> parse_word_list(std::string_view text);
std::vector<unicode::CodePointRange> parse_code_point_ranges(std::string_view text);

std::string case_fold(std::string_view text);
/// Replaces each punctuation code point with one space.
std::string strip_punctuation(std::string_view text);
std::string strip_emoji(std::string_view text);
std::string strip_emoji(std::string_view text, std::span<const unicode::CodePointRange> ranges);
/// Splits on runs of Unicode whitespace; never yields empty tokens.
std::vector<std::string> tokenize(std::string_view text);
std::vector<std::string> remove_stopwords(std::vector<std::string> tokens, const PipelineConfig& config);
/// Porter (1980) suffix stripping. Tokens of length <= 2 and tokens that are
/// not purely ASCII lowercase letters are returned unchanged.
std::string stem(std::string_view token);

/// case_fold -> strip_emoji -> strip_punctuation -> tokenize ->
/// remove_stopwords -> stem.
std::vector<std::string> preprocess(std::string_view text, const PipelineConfig& config);

}  // namespace text

/// Sorted, duplicate-free list of processed tokens defining the bag-of-words
/// dimensions.
class Vocabulary {
 public:
  Vocabulary() = default;
  /// Sorts and deduplicates.
  explicit Vocabulary(std::vector<std::string> words);

  const std::vector<std::string>& words() const noexcept { return words_; }
  std::size_t size() const noexcept { return words_.size(); }
  bool empty() const noexcept { return words_.empty(); }
  std::optional<std::size_t> index_of(std::string_view word) const;

  bool operator==(const Vocabulary& other) const { return words_ == other.words_; }

 private:
  struct Hash {
    using is_transparent = void;
    std::size_t operator()(std::string_view s) const noexcept { return std::hash<std::string_view>{}(s); }
  };
  std::vector<std::string> words_;
  std::unordered_map<std::string, std::size_t, Hash, std::equal_to<>> index_;
};

/// Binary presence vector over a Vocabulary.
using BowVector = std::vector<std::uint8_t>;

struct LabeledDataset {
  std::vector<BowVector> features;
  std::vector<std::size_t> labels;
  std::vector<std::string> label_names;
  Vocabulary vocabulary;

  std::size_t size() const noexcept { return features.size(); }
  bool operator==(const LabeledDataset&) const = default;
};

/// Sorted union of preprocess(p) over every pattern. Throws PreconditionError
/// when all patterns reduce to nothing.
Vocabulary build_vocabulary(const Corpus& corpus, const text::PipelineConfig& config);
Vocabulary build_vocabulary(std::span<const Example> examples, const text::PipelineConfig& config);

BowVector bag_of_words(std::span<const std::string> tokens, const Vocabulary& vocabulary);

/// One row per pattern, labels in corpus tag order, vocabulary from the same
/// corpus.
LabeledDataset encode_dataset(const Corpus& corpus, const text::PipelineConfig& config,
                              Exec exec = Exec::parallel);

/// Encodes examples against an existing vocabulary (e.g. a test split against
/// the training vocabulary).
LabeledDataset encode_examples(std::span<const Example> examples, std::vector<std::string> label_names,
                               const Vocabulary& vocabulary, const text::PipelineConfig& config,
                               Exec exec = Exec::parallel);

}  // namespace vta
