#!/usr/bin/env python3
"""Convert SentEval binary classification corpora to `<label>\t<text>` files.

Fetch the raw data with SentEval's `data/downstream/get_transfer_data.bash`
(https://github.com/facebookresearch/SentEval), then run

    python3 scripts/prepare_senteval.py <SentEval>/data/downstream crates/core/data

which writes sst.tsv, mr.tsv, cr.tsv, mpqa.tsv and subj.tsv for every corpus
found. Text is kept verbatim apart from collapsing whitespace.
"""

import argparse
import pathlib
import sys

# corpus -> list of (relative file, label or None when the label is in-line)
PAIRED = {
    "mr": [("MR/rt-polarity.pos", 1), ("MR/rt-polarity.neg", 0)],
    "cr": [("CR/custrev.pos", 1), ("CR/custrev.neg", 0)],
    "mpqa": [("MPQA/mpqa.pos", 1), ("MPQA/mpqa.neg", 0)],
    "subj": [("SUBJ/subj.subjective", 1), ("SUBJ/subj.objective", 0)],
}
SST_FILES = ["sentiment-train", "sentiment-dev", "sentiment-test"]


def read_lines(path):
    with open(path, encoding="utf-8", errors="replace") as f:
        for line in f:
            text = " ".join(line.split())
            if text:
                yield text


def paired(root, files):
    rows = []
    for rel, label in files:
        rows.extend((label, text) for text in read_lines(root / rel))
    return rows


def sst(root):
    rows = []
    for name in SST_FILES:
        path = root / "SST" / "binary" / name
        if not path.exists():
            continue
        for line in read_lines(path):
            text, _, label = line.rpartition(" ")
            if label not in ("0", "1"):
                raise ValueError(f"{path}: unexpected label in {line!r}")
            rows.append((int(label), text))
    return rows


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("downstream", type=pathlib.Path, help="SentEval data/downstream directory")
    parser.add_argument("out", type=pathlib.Path, help="output directory")
    args = parser.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)

    corpora = {"sst": lambda: sst(args.downstream)}
    for name, files in PAIRED.items():
        if all((args.downstream / rel).exists() for rel, _ in files):
            corpora[name] = lambda files=files: paired(args.downstream, files)

    written = 0
    for name, load in corpora.items():
        rows = load()
        if not rows:
            print(f"{name}: not found, skipped", file=sys.stderr)
            continue
        path = args.out / f"{name}.tsv"
        with open(path, "w", encoding="utf-8") as f:
            for label, text in rows:
                f.write(f"{label}\t{text}\n")
        positives = sum(label for label, _ in rows)
        print(f"{path}: {len(rows)} examples, {positives} positive")
        written += 1
    return 0 if written else 1


if __name__ == "__main__":
    sys.exit(main())
