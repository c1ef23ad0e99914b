#!/usr/bin/env python3
"""Take the top-N entries of a "word<TAB>count" unigram file (wordsegment format)."""
import argparse


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("unigrams")
    ap.add_argument("out_tsv")
    ap.add_argument("--top", type=int, default=50000)
    args = ap.parse_args()

    rows = []
    with open(args.unigrams, encoding="utf-8") as f:
        for line in f:
            word, count = line.rstrip("\n").split("\t")
            if word.isalnum() and word.isascii():
                rows.append((word.lower(), int(count)))
    rows.sort(key=lambda r: (-r[1], r[0]))
    with open(args.out_tsv, "w", encoding="utf-8") as out:
        for word, count in rows[: args.top]:
            out.write(f"{word}\t{count}\n")


if __name__ == "__main__":
    main()
