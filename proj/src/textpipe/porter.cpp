// Porter suffix-stripping stemmer, original 1980 rule set.

#include <algorithm>
#include <string>
#include <string_view>
#include <vector>

#include "vta/textpipe.hpp"

namespace vta::text {
namespace {

bool is_vowel_letter(char c) { return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u'; }

// y is a consonant at the start of a word or after a vowel. Runs of y are
// resolved by parity so the test stays linear.
bool is_consonant(std::string_view w, std::size_t i) {
  bool flip = false;
  while (i > 0 && w[i] == 'y') {
    flip = !flip;
    --i;
  }
  return !is_vowel_letter(w[i]) != flip;
}

std::vector<bool> consonant_flags(std::string_view w) {
  std::vector<bool> flags(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (is_vowel_letter(w[i])) {
      flags[i] = false;
    } else if (w[i] == 'y') {
      flags[i] = i == 0 || !flags[i - 1];
    } else {
      flags[i] = true;
    }
  }
  return flags;
}

// m in [C](VC){m}[V].
int measure(std::string_view w) {
  const auto flags = consonant_flags(w);
  int m = 0;
  for (std::size_t i = 1; i < flags.size(); ++i) {
    if (flags[i] && !flags[i - 1]) ++m;
  }
  return m;
}

bool contains_vowel(std::string_view w) {
  const auto flags = consonant_flags(w);
  return std::find(flags.begin(), flags.end(), false) != flags.end();
}

bool ends_double_consonant(std::string_view w) {
  const std::size_t n = w.size();
  return n >= 2 && w[n - 1] == w[n - 2] && is_consonant(w, n - 1);
}

// *o: stem ends consonant-vowel-consonant, last not w, x or y.
bool ends_cvc(std::string_view w) {
  const std::size_t n = w.size();
  if (n < 3) return false;
  const char last = w[n - 1];
  return is_consonant(w, n - 3) && !is_consonant(w, n - 2) && is_consonant(w, n - 1) && last != 'w' &&
         last != 'x' && last != 'y';
}

bool ends_with(std::string_view w, std::string_view suffix) {
  return w.size() >= suffix.size() && w.substr(w.size() - suffix.size()) == suffix;
}

std::string_view stem_of(std::string_view w, std::string_view suffix) {
  return w.substr(0, w.size() - suffix.size());
}

struct Rule {
  std::string_view suffix;
  std::string_view replacement;
};

// Applies the first rule whose suffix matches, if the remaining stem has
// measure > min_measure. A matching suffix whose condition fails stops the
// scan (longest-match semantics of the rule lists).
void apply_measure_rules(std::string& w, std::span<const Rule> rules, int min_measure) {
  for (const auto& rule : rules) {
    if (!ends_with(w, rule.suffix)) continue;
    const auto stem = stem_of(w, rule.suffix);
    if (measure(stem) > min_measure) {
      w = std::string(stem).append(rule.replacement);
    }
    return;
  }
}

void step1a(std::string& w) {
  if (ends_with(w, "sses")) {
    w.resize(w.size() - 2);
  } else if (ends_with(w, "ies")) {
    w.resize(w.size() - 2);
  } else if (ends_with(w, "ss")) {
    // unchanged
  } else if (ends_with(w, "s")) {
    w.pop_back();
  }
}

void step1b(std::string& w) {
  if (ends_with(w, "eed")) {
    if (measure(stem_of(w, "eed")) > 0) w.pop_back();
    return;
  }
  std::string_view removed;
  if (ends_with(w, "ed") && contains_vowel(stem_of(w, "ed"))) {
    removed = "ed";
  } else if (ends_with(w, "ing") && contains_vowel(stem_of(w, "ing"))) {
    removed = "ing";
  } else {
    return;
  }
  w.resize(w.size() - removed.size());
  if (ends_with(w, "at") || ends_with(w, "bl") || ends_with(w, "iz")) {
    w.push_back('e');
  } else if (ends_double_consonant(w)) {
    const char last = w.back();
    if (last != 'l' && last != 's' && last != 'z') w.pop_back();
  } else if (measure(w) == 1 && ends_cvc(w)) {
    w.push_back('e');
  }
}

void step1c(std::string& w) {
  if (ends_with(w, "y") && contains_vowel(stem_of(w, "y"))) w.back() = 'i';
}

constexpr Rule kStep2[] = {
    {"ational", "ate"}, {"tional", "tion"}, {"enci", "ence"},   {"anci", "ance"},    {"izer", "ize"},
    {"abli", "able"},   {"alli", "al"},     {"entli", "ent"},   {"eli", "e"},        {"ousli", "ous"},
    {"ization", "ize"}, {"ation", "ate"},   {"ator", "ate"},    {"alism", "al"},     {"iveness", "ive"},
    {"fulness", "ful"}, {"ousness", "ous"}, {"aliti", "al"},    {"iviti", "ive"},    {"biliti", "ble"},
};

constexpr Rule kStep3[] = {
    {"icate", "ic"}, {"ative", ""}, {"alize", "al"}, {"iciti", "ic"}, {"ical", "ic"}, {"ful", ""}, {"ness", ""},
};

constexpr std::string_view kStep4[] = {
    "al", "ance", "ence", "er", "ic", "able", "ible", "ant", "ement", "ment",
    "ent", "ion", "ou", "ism", "ate", "iti", "ous", "ive", "ize",
};

void step4(std::string& w) {
  for (const auto suffix : kStep4) {
    if (!ends_with(w, suffix)) continue;
    const auto stem = stem_of(w, suffix);
    bool ok = measure(stem) > 1;
    if (ok && suffix == "ion") ok = !stem.empty() && (stem.back() == 's' || stem.back() == 't');
    if (ok) w.resize(stem.size());
    return;
  }
}

void step5a(std::string& w) {
  if (!ends_with(w, "e")) return;
  const auto stem = stem_of(w, "e");
  const int m = measure(stem);
  if (m > 1 || (m == 1 && !ends_cvc(stem))) w.pop_back();
}

void step5b(std::string& w) {
  if (ends_with(w, "ll") && measure(w) > 1) w.pop_back();
}

}  // namespace

std::string stem(std::string_view token) {
  std::string w(token);
  if (w.size() <= 2) return w;
  if (!std::all_of(w.begin(), w.end(), [](char c) { return c >= 'a' && c <= 'z'; })) return w;
  step1a(w);
  step1b(w);
  step1c(w);
  apply_measure_rules(w, kStep2, 0);
  apply_measure_rules(w, kStep3, 0);
  step4(w);
  step5a(w);
  step5b(w);
  return w;
}

}  // namespace vta::text
