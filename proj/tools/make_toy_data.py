#!/usr/bin/env python3
"""Generate the bundled toy corpora under data/toy.

English-like source side, CJK target side. Every pair is direction-marked by
construction: the original side draws from an "original" marker vocabulary and
the translated side from a "translationese" one, so the gold direction of each
line is known. Output is deterministic for a given --seed.
"""

import argparse
import random
from pathlib import Path

EN_CONTENT = (
    "market policy river engine garden signal report city valve patent claim device "
    "court budget school harbor network sensor contract bridge forest factory museum "
    "method layer window train letter album player season vote storm island"
).split()
EN_FUNCTION = "the a of to in on with for and that is was by from at as".split()
EN_ORIGINAL = "indeed whereas albeit hence thus moreover lest seldom".split()
EN_TRANSLATED = "carry conduct implement carried perform regarding aspect aforementioned".split()

ZH_CONTENT = list("市场政策河流引擎花园信号报告城市阀门专利设备法院预算学校港口网络合同桥梁森林工厂")
ZH_FUNCTION = list("的了在是和与对把被从")
ZH_ORIGINAL = list("嘛呢吧啦哇呗咯")
ZH_TRANSLATED = list("进行实施有关方面所述予以")

SUB_CORPORA = ("news", "patent", "social")


def en_sentence(rng, markers):
    words = []
    for _ in range(rng.randint(6, 12)):
        pool = rng.choice((EN_CONTENT, EN_CONTENT, EN_FUNCTION))
        words.append(rng.choice(pool))
    for _ in range(rng.randint(1, 2)):
        words.insert(rng.randrange(len(words) + 1), rng.choice(markers))
    words[0] = words[0].capitalize()
    return " ".join(words) + " ."


def zh_sentence(rng, markers):
    chars = []
    for _ in range(rng.randint(8, 16)):
        pool = rng.choice((ZH_CONTENT, ZH_CONTENT, ZH_FUNCTION))
        chars.append(rng.choice(pool))
    for _ in range(rng.randint(1, 2)):
        chars.insert(rng.randrange(len(chars) + 1), rng.choice(markers))
    return "".join(chars) + "。"


def pair(rng, source_original):
    if source_original:
        return en_sentence(rng, EN_ORIGINAL), zh_sentence(rng, ZH_TRANSLATED)
    return en_sentence(rng, EN_TRANSLATED), zh_sentence(rng, ZH_ORIGINAL)


def corrupt(rng, reference):
    """Fake MT output: drop, substitute and locally swap reference characters."""
    chars = list(reference)
    out = []
    for c in chars:
        r = rng.random()
        if r < 0.08:
            continue
        if r < 0.18:
            out.append(rng.choice(ZH_CONTENT))
        else:
            out.append(c)
    if len(out) > 3 and rng.random() < 0.5:
        i = rng.randrange(len(out) - 3)
        out[i : i + 3] = out[i + 1 : i + 3] + out[i : i + 1]
    if not out:
        out = [rng.choice(ZH_CONTENT)]
    return "".join(out)


def write_lines(path, lines):
    path.write_text("".join(line + "\n" for line in lines), encoding="utf-8")


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", type=Path, default=Path(__file__).resolve().parent.parent / "data" / "toy")
    ap.add_argument("--pairs", type=int, default=240, help="pairs per sub-corpus")
    ap.add_argument("--train", type=int, default=600, help="classifier lines per class per side")
    ap.add_argument("--seed", type=int, default=20240601)
    args = ap.parse_args()

    rng = random.Random(args.seed)
    out = args.out
    (out / "corpora").mkdir(parents=True, exist_ok=True)
    (out / "train").mkdir(parents=True, exist_ok=True)

    manifest, mt_manifest, gold = [], [], []
    for name in SUB_CORPORA:
        src, tgt, mt = [], [], []
        for line in range(args.pairs):
            so = rng.random() < 0.5
            s, t = pair(rng, so)
            src.append(s)
            tgt.append(t)
            mt.append(corrupt(rng, t))
            gold.append(f"{name}\t{line}\t{'SourceOriginal' if so else 'TargetOriginal'}")
        write_lines(out / "corpora" / f"{name}.en", src)
        write_lines(out / "corpora" / f"{name}.zh", tgt)
        write_lines(out / "corpora" / f"{name}.mt", mt)
        manifest.append(f"{name}\tcorpora/{name}.en\tcorpora/{name}.zh")
        mt_manifest.append(f"{name}\tcorpora/{name}.mt")
    write_lines(out / "manifest.tsv", ["# name\tsource\ttarget"] + manifest)
    write_lines(out / "mt.tsv", ["# name\tmt hypotheses"] + mt_manifest)
    write_lines(out / "gold.tsv", ["# sub_corpus\tline\tdirection"] + gold)

    write_lines(out / "train" / "src.original.txt", [en_sentence(rng, EN_ORIGINAL) for _ in range(args.train)])
    write_lines(out / "train" / "src.translationese.txt",
                [en_sentence(rng, EN_TRANSLATED) for _ in range(args.train)])
    write_lines(out / "train" / "tgt.original.txt", [zh_sentence(rng, ZH_ORIGINAL) for _ in range(args.train)])
    write_lines(out / "train" / "tgt.translationese.txt",
                [zh_sentence(rng, ZH_TRANSLATED) for _ in range(args.train)])


if __name__ == "__main__":
    main()
