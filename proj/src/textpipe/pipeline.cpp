#include <algorithm>
#include <charconv>
#include <sstream>

#include "embedded_data.hpp"
#include "vta/error.hpp"
#include "vta/textpipe.hpp"

namespace vta {
namespace text {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::string_view strip_comment(std::string_view line) {
  const auto hash = line.find('#');
  return trim(hash == std::string_view::npos ? line : line.substr(0, hash));
}

char32_t parse_hex(std::string_view s) {
  std::uint32_t value = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value, 16);
  if (ec != std::errc{} || ptr != s.data() + s.size() || value > 0x10FFFF) {
    throw ParseError("bad code point '" + std::string(s) + "'");
  }
  return static_cast<char32_t>(value);
}

template <class Fn>
void for_each_line(std::string_view text, Fn&& fn) {
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    const auto line = strip_comment(text.substr(start, end - start));
    if (!line.empty()) fn(line);
    start = end + 1;
  }
}

}  // namespace

std::set<std::string, std::less<>> parse_word_list(std::string_view text) {
  std::set<std::string, std::less<>> out;
  for_each_line(text, [&](std::string_view line) { out.emplace(line); });
  return out;
}

std::vector<unicode::CodePointRange> parse_code_point_ranges(std::string_view text) {
  std::vector<unicode::CodePointRange> out;
  for_each_line(text, [&](std::string_view line) {
    const auto dots = line.find("..");
    unicode::CodePointRange r{};
    if (dots == std::string_view::npos) {
      r.first = r.last = parse_hex(line);
    } else {
      r.first = parse_hex(trim(line.substr(0, dots)));
      r.last = parse_hex(trim(line.substr(dots + 2)));
    }
    if (r.last < r.first) throw ParseError("inverted code point range '" + std::string(line) + "'");
    out.push_back(r);
  });
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  // Merge overlaps so binary search over range starts is exact.
  std::vector<unicode::CodePointRange> merged;
  for (const auto& r : out) {
    if (!merged.empty() && r.first <= merged.back().last + 1) {
      merged.back().last = std::max(merged.back().last, r.last);
    } else {
      merged.push_back(r);
    }
  }
  return merged;
}

const std::set<std::string, std::less<>>& default_stopwords() {
  static const auto words = parse_word_list(data::kStopwordsText);
  return words;
}

const std::set<std::string, std::less<>>& default_keep_words() {
  static const std::set<std::string, std::less<>> words = {
      "if", "else", "for", "while", "in", "is", "and", "or", "not", "return", "class", "def"};
  return words;
}

std::span<const unicode::CodePointRange> emoji_ranges() {
  static const auto ranges = parse_code_point_ranges(data::kEmojiRangesText);
  return ranges;
}

PipelineConfig PipelineConfig::defaults() {
  PipelineConfig c;
  c.stopwords = default_stopwords();
  c.keep_words = default_keep_words();
  return c;
}

PipelineConfig PipelineConfig::disabled() {
  PipelineConfig c;
  c.strip_emoji = false;
  c.strip_punctuation = false;
  c.stem = false;
  return c;
}

bool PipelineConfig::removes(std::string_view token) const {
  return stopwords.find(token) != stopwords.end() && keep_words.find(token) == keep_words.end();
}

std::string case_fold(std::string_view text) {
  auto cps = unicode::decode_utf8(text);
  for (auto& cp : cps) cp = unicode::to_lower(cp);
  return unicode::encode_utf8(cps);
}

std::string strip_punctuation(std::string_view text) {
  auto cps = unicode::decode_utf8(text);
  for (auto& cp : cps) {
    if (unicode::is_punctuation(cp)) cp = U' ';
  }
  return unicode::encode_utf8(cps);
}

std::string strip_emoji(std::string_view text, std::span<const unicode::CodePointRange> ranges) {
  const auto cps = unicode::decode_utf8(text);
  std::string out;
  out.reserve(text.size());
  for (char32_t cp : cps) {
    if (!unicode::in_ranges(ranges, cp)) unicode::append_utf8(out, cp);
  }
  return out;
}

std::string strip_emoji(std::string_view text) { return strip_emoji(text, emoji_ranges()); }

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  for (char32_t cp : unicode::decode_utf8(text)) {
    if (unicode::is_whitespace(cp)) {
      if (!current.empty()) tokens.push_back(std::move(current));
      current.clear();
    } else {
      unicode::append_utf8(current, cp);
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

std::vector<std::string> remove_stopwords(std::vector<std::string> tokens, const PipelineConfig& config) {
  std::erase_if(tokens, [&](const std::string& t) { return config.removes(t); });
  return tokens;
}

std::vector<std::string> preprocess(std::string_view input, const PipelineConfig& config) {
  std::string text = case_fold(input);
  if (config.strip_emoji) text = strip_emoji(text);
  if (config.strip_punctuation) text = strip_punctuation(text);
  auto tokens = remove_stopwords(tokenize(text), config);
  if (config.stem) {
    for (auto& t : tokens) t = stem(t);
  }
  return tokens;
}

}  // namespace text

Vocabulary::Vocabulary(std::vector<std::string> words) : words_(std::move(words)) {
  std::sort(words_.begin(), words_.end());
  words_.erase(std::unique(words_.begin(), words_.end()), words_.end());
  index_.reserve(words_.size());
  for (std::size_t i = 0; i < words_.size(); ++i) index_.emplace(words_[i], i);
}

std::optional<std::size_t> Vocabulary::index_of(std::string_view word) const {
  const auto it = index_.find(word);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

Vocabulary build_vocabulary(std::span<const Example> examples, const text::PipelineConfig& config) {
  std::vector<std::string> words;
  for (const auto& ex : examples) {
    auto tokens = text::preprocess(ex.text, config);
    words.insert(words.end(), std::make_move_iterator(tokens.begin()), std::make_move_iterator(tokens.end()));
  }
  Vocabulary vocab(std::move(words));
  if (vocab.empty()) throw PreconditionError("vocabulary is empty: every pattern reduces to no tokens");
  return vocab;
}

Vocabulary build_vocabulary(const Corpus& corpus, const text::PipelineConfig& config) {
  const auto examples = all_examples(corpus);
  return build_vocabulary(examples, config);
}

BowVector bag_of_words(std::span<const std::string> tokens, const Vocabulary& vocabulary) {
  BowVector bits(vocabulary.size(), 0);
  for (const auto& t : tokens) {
    if (const auto i = vocabulary.index_of(t)) bits[*i] = 1;
  }
  return bits;
}

LabeledDataset encode_examples(std::span<const Example> examples, std::vector<std::string> label_names,
                               const Vocabulary& vocabulary, const text::PipelineConfig& config, Exec exec) {
  LabeledDataset out;
  out.features.resize(examples.size());
  out.labels.resize(examples.size());
  for (const auto& ex : examples) {
    if (ex.label >= label_names.size()) {
      throw PreconditionError("example label " + std::to_string(ex.label) + " has no tag name");
    }
  }
  for_each_index(exec, examples.size(), [&](std::size_t i) {
    const auto tokens = text::preprocess(examples[i].text, config);
    out.features[i] = bag_of_words(tokens, vocabulary);
    out.labels[i] = examples[i].label;
  });
  out.label_names = std::move(label_names);
  out.vocabulary = vocabulary;
  return out;
}

LabeledDataset encode_dataset(const Corpus& corpus, const text::PipelineConfig& config, Exec exec) {
  const auto examples = all_examples(corpus);
  const auto vocab = build_vocabulary(examples, config);
  return encode_examples(examples, corpus.tags(), vocab, config, exec);
}

}  // namespace vta
