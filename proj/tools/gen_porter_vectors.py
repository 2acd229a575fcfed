#!/usr/bin/env python3
"""Writes tests/data/porter_vectors.txt: "word stem" lines from NLTK's
PorterStemmer in ORIGINAL_ALGORITHM mode, over every lowercase word of
length >= 3 found in the given text files."""
import re
import sys

from nltk.stem.porter import PorterStemmer


def main(out_path, inputs):
    words = set()
    for path in inputs:
        with open(path, encoding="utf-8", errors="replace") as f:
            words.update(w.lower() for w in re.findall(r"[A-Za-z]+", f.read()))
    words = sorted(w for w in words if len(w) >= 3)
    stemmer = PorterStemmer(mode=PorterStemmer.ORIGINAL_ALGORITHM)
    with open(out_path, "w", encoding="utf-8") as out:
        out.write("# word stem, NLTK PorterStemmer ORIGINAL_ALGORITHM\n")
        for w in words:
            out.write(f"{w} {stemmer.stem(w, to_lowercase=False)}\n")
    print(f"{len(words)} vectors -> {out_path}")


if __name__ == "__main__":
    main(sys.argv[1], sys.argv[2:])
