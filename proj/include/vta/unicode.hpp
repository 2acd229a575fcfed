#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>

namespace vta::unicode {

struct CodePointRange {
  char32_t first;
  char32_t last;
};

inline constexpr char32_t kReplacementChar = 0xFFFD;

/// Decodes UTF-8; every ill-formed sequence (overlong, surrogate, truncated,
/// out of range) becomes one U+FFFD.
std::u32string decode_utf8(std::string_view bytes);
std::string encode_utf8(std::u32string_view code_points);
void append_utf8(std::string& out, char32_t cp);

/// Simple (one-to-one) lowercase mapping.
char32_t to_lower(char32_t cp) noexcept;
/// General category P* (Pc, Pd, Ps, Pe, Pi, Pf, Po).
bool is_punctuation(char32_t cp) noexcept;
/// The White_Space property.
bool is_whitespace(char32_t cp) noexcept;

bool in_ranges(std::span<const CodePointRange> sorted_ranges, char32_t cp) noexcept;

/// True when the text is empty or holds only White_Space code points.
bool is_blank(std::string_view text);

}  // namespace vta::unicode
