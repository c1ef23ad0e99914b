#!/usr/bin/env python3
"""Convert a confusable_homoglyphs confusables.json into the TSV used by the idn module.

Output lines: <source code point, hex> TAB <target code points, hex, space separated>.
Targets are ASCII strings over [a-z0-9.-].
Only non-ASCII sources with an ASCII replacement are kept.
"""
import argparse
import json
import re

ALLOWED = re.compile(r"^[a-z0-9.\-]+$")


def clean(s):
    return s.replace("‎", "").replace("‏", "")


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("confusables_json")
    ap.add_argument("out_tsv")
    args = ap.parse_args()

    with open(args.confusables_json, encoding="utf-8") as f:
        table = json.load(f)

    rows = {}
    for key, entries in table.items():
        src = clean(key)
        if len(src) != 1 or ord(src) < 0x80:
            continue
        best = None
        for e in entries:
            cand = clean(e["c"]).lower()
            if ALLOWED.match(cand):
                if best is None or len(cand) < len(best):
                    best = cand
        if best is not None:
            rows[ord(src)] = best

    with open(args.out_tsv, "w", encoding="utf-8") as out:
        out.write("# source code point (hex)\tascii target code points (hex)\n")
        for cp in sorted(rows):
            out.write(f"{cp:04X}\t{' '.join(f'{ord(c):04X}' for c in rows[cp])}\n")


if __name__ == "__main__":
    main()
