"""Rebuild the bundled pinyin and character-frequency tables.

Frequencies are occurrences per million characters, summed over the word
counts of the jieba dictionary. Pinyin is the default (most common) toneless
reading reported by pypinyin.

    pip install pypinyin jieba
    python3 scripts/build_char_tables.py crates/core/resources
"""
import collections
import os
import sys

import jieba
from pypinyin import Style, lazy_pinyin


def main(out_dir):
    dict_path = os.path.join(os.path.dirname(jieba.__file__), "dict.txt")
    counts = collections.Counter()
    with open(dict_path, encoding="utf8") as f:
        for line in f:
            word, freq, _ = line.split(" ")
            for ch in word:
                counts[ch] += int(freq)
    total = sum(counts.values())
    chars = sorted(
        ch for ch in counts if "一" <= ch <= "鿿"
    )
    with open(os.path.join(out_dir, "char_freq.tsv"), "w", encoding="utf8") as f:
        f.write("# char\toccurrences per million characters\n")
        for ch in chars:
            f.write(f"{ch}\t{round(counts[ch] * 1_000_000 / total)}\n")
    with open(os.path.join(out_dir, "pinyin.tsv"), "w", encoding="utf8") as f:
        f.write("# char\ttoneless syllable\n")
        for ch in chars:
            syl = lazy_pinyin(ch, style=Style.NORMAL, errors="ignore")
            if not syl:
                continue
            syl = syl[0].lower()
            if syl.isascii() and syl.isalpha():
                f.write(f"{ch}\t{syl}\n")


if __name__ == "__main__":
    main(sys.argv[1])
