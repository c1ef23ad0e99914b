#!/usr/bin/env python3
"""Generate a deterministic top-sites list in tranco CSV form ("rank,domain").

The head of the list is a real top-500 snapshot (npm top-sites). The rest is
synthesized from frequent English words with a com-heavy TLD mix, a share of
brands registered under several TLDs, and the long TLD tail of the public
suffix list.
"""
import argparse
import json
import random

HEAD_TLDS = [
    ("com", 520), ("org", 55), ("net", 45), ("de", 38), ("ru", 34), ("co.uk", 20),
    ("jp", 14), ("fr", 14), ("it", 12), ("br", 4), ("com.br", 12), ("pl", 11),
    ("in", 10), ("nl", 10), ("io", 9), ("au", 2), ("com.au", 8), ("es", 8),
    ("ca", 8), ("cn", 7), ("info", 7), ("edu", 7), ("gov", 6), ("co", 6),
    ("ch", 5), ("cz", 5), ("ir", 5), ("us", 5), ("eu", 5), ("se", 4),
    ("be", 4), ("at", 4), ("tv", 4), ("me", 4), ("dk", 3), ("gr", 3),
    ("ua", 3), ("tw", 3), ("kr", 3), ("vn", 3), ("co.jp", 3), ("co.in", 2),
    ("com.tr", 2), ("mx", 2), ("com.mx", 2), ("ar", 1), ("com.ar", 2), ("no", 2),
    ("fi", 2), ("hu", 2), ("ro", 2), ("sk", 2), ("pt", 2), ("xyz", 2),
    ("app", 2), ("ai", 2), ("online", 1), ("site", 1), ("club", 1), ("top", 1),
    ("gov.uk", 1), ("ac.uk", 1), ("org.uk", 1), ("co.za", 1), ("co.kr", 1),
    ("com.cn", 1), ("com.tw", 1), ("ne.jp", 1), ("or.jp", 1), ("ac.jp", 1),
]

SUFFIX_WORDS = ["online", "shop", "app", "hub", "news", "tv", "blog", "store",
                "web", "net", "media", "group", "world", "24", "365", "pro", "cloud"]


def load_suffixes(psl_path):
    out = []
    with open(psl_path, encoding="utf-8") as f:
        for line in f:
            line = line.strip()
            if line.startswith("// ===END ICANN DOMAINS"):
                break
            if not line or line.startswith("//") or line[0] in "*!":
                continue
            if line.isascii() and all(c.isalnum() or c in ".-" for c in line):
                out.append(line.lower())
    return out


def registrable(host, suffixes):
    labels = host.split(".")
    if any(not l for l in labels):
        return None
    for i in range(len(labels)):
        if ".".join(labels[i:]) in suffixes:
            if i == 0:
                return None
            return ".".join(labels[i - 1:])
    return ".".join(labels[-2:])


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--top-sites", required=True)
    ap.add_argument("--unigrams", required=True)
    ap.add_argument("--psl", required=True)
    ap.add_argument("--out", required=True)
    ap.add_argument("--size", type=int, default=100000)
    ap.add_argument("--seed", type=int, default=20211)
    args = ap.parse_args()

    rng = random.Random(args.seed)
    suffix_list = load_suffixes(args.psl)
    suffix_set = set(suffix_list)

    with open(args.top_sites, encoding="utf-8") as f:
        sites = json.load(f)
    domains = []
    seen = set()
    brands = set()
    for s in sites:
        d = registrable(s["rootDomain"].lower().removeprefix("www."), suffix_set)
        if d and d not in seen:
            seen.add(d)
            domains.append(d)
            brands.add(d.split(".", 1)[0])

    words = []
    with open(args.unigrams, encoding="utf-8") as f:
        for i, line in enumerate(f):
            w = line.split("\t", 1)[0]
            if 60 <= i < 40000 and w.isalpha() and 2 <= len(w) <= 11 and w not in brands:
                words.append(w)
    head_words = words[:6000]

    head_names = [t for t, _ in HEAD_TLDS]
    head_weights = [w for _, w in HEAD_TLDS]
    tail = [t for t in suffix_list if t not in set(head_names) and "." not in t]
    rng.shuffle(tail)
    tail = tail[:700]

    def pick_tld():
        if rng.random() < 0.035:
            return rng.choice(tail)
        return rng.choices(head_names, head_weights)[0]

    def word():
        if rng.random() < 0.6:
            return rng.choice(head_words)
        return rng.choice(words)

    def make_brand():
        r = rng.random()
        if r < 0.22:
            b = word()
        elif r < 0.57:
            b = word() + word()
        elif r < 0.65:
            b = word() + "-" + word()
        elif r < 0.70:
            b = word() + str(rng.randint(1, 999))
        elif r < 0.80:
            n = rng.randint(2, 5)
            b = "".join(rng.choice("abcdefghijklmnopqrstuvwxyz") for _ in range(n))
        elif r < 0.92:
            b = word() + rng.choice(SUFFIX_WORDS)
        else:
            b = word() + word() + word()
        return b[:30]

    while len(domains) < args.size:
        b = make_brand()
        if b in brands:
            continue
        brands.add(b)
        if rng.random() < 0.06:
            k = rng.choice([2, 2, 2, 3, 3, 4])
            tlds = set()
            while len(tlds) < k:
                tlds.add(pick_tld())
            tlds = sorted(tlds, key=lambda t: (t != "com", rng.random()))
        else:
            tlds = [pick_tld()]
        for t in tlds:
            d = f"{b}.{t}"
            if d not in seen and len(domains) < args.size:
                seen.add(d)
                domains.append(d)

    with open(args.out, "w", encoding="utf-8") as out:
        for i, d in enumerate(domains, 1):
            out.write(f"{i},{d}\n")


if __name__ == "__main__":
    main()
