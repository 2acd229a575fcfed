#!/usr/bin/env python3
"""Regenerates src/textpipe/unicode_tables.inc from Python's unicodedata.

Usage: python3 tools/gen_unicode_tables.py > src/textpipe/unicode_tables.inc

Only one-to-one lowercase mappings are emitted; code points whose lowercase
form expands to several code points (U+0130) are left unchanged.
"""
import unicodedata


def lowercase_pairs():
    for cp in range(0x110000):
        ch = chr(cp)
        low = ch.lower()
        if len(low) == 1 and low != ch:
            yield cp, ord(low)


def punctuation_ranges():
    start = None
    for cp in range(0x110001):
        is_punct = cp < 0x110000 and unicodedata.category(chr(cp)).startswith("P")
        if is_punct and start is None:
            start = cp
        elif not is_punct and start is not None:
            yield start, cp - 1
            start = None


def main():
    print("// Generated by tools/gen_unicode_tables.py from Unicode %s. Do not edit."
          % unicodedata.unidata_version)
    print("// clang-format off")
    print("inline constexpr CaseMapping kLowercaseTable[] = {")
    for src, dst in lowercase_pairs():
        print("    {0x%04X, 0x%04X}," % (src, dst))
    print("};")
    print()
    print("inline constexpr CodePointRange kPunctuationRanges[] = {")
    for lo, hi in punctuation_ranges():
        print("    {0x%04X, 0x%04X}," % (lo, hi))
    print("};")
    print("// clang-format on")


if __name__ == "__main__":
    main()
