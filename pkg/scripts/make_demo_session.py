#!/usr/bin/env python3
"""Build a small synthetic review session end to end and start the service.

Produces a corpus, map, lexicon, and interleaved sheet under --out, then
serves the annotation API (and the browser UI when frontend/dist exists) on
--port. Handy for trying the reviewer workflow without real data.
"""

import argparse
import sys
from pathlib import Path

from bilex.cli import main as bilex


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default="demo-session")
    parser.add_argument("--port", type=int, default=8765)
    parser.add_argument("--seed", type=int, default=1)
    parser.add_argument("--entries-per-variant", type=int, default=5)
    args = parser.parse_args()

    out = Path(args.out)
    steps = [
        ["synth", "--out", out, "--lexicon-size", "60", "--segment-count", "80",
         "--cognate-rate", "0.6", "--omission-rate", "0.05", "--seed", str(args.seed)],
        ["tokenize", "--out", out,
         "--text-a", out / "half_a.txt", "--text-b", out / "half_b.txt",
         "--stoplist-a", out / "stoplist_a.txt", "--stoplist-b", out / "stoplist_b.txt"],
        ["map", "--out", out,
         "--tokens-a", out / "tokens_a.tsv", "--tokens-b", out / "tokens_b.tsv"],
        ["cooccur", "--out", out,
         "--tokens-a", out / "tokens_a.tsv", "--tokens-b", out / "tokens_b.tsv",
         "--map", out / "bitext.map"],
        ["induce", "--out", out,
         "--pairs", out / "band_pairs.tsv", "--counts", out / "counts.tsv"],
        ["sample", "--out", out, "--n", str(args.entries_per_variant), "--seed", str(args.seed),
         "--lexicons",
         f"plain2={out / 'lexicon.tsv'}", f"plain3={out / 'lexicon.tsv'}",
         f"mrd2={out / 'lexicon.tsv'}", f"mrd3={out / 'lexicon.tsv'}"],
    ]
    for step in steps:
        code = bilex([str(part) for part in step])
        if code != 0:
            return code

    ui_dist = Path(__file__).resolve().parent.parent / "frontend" / "dist"
    serve = ["serve", "--out", out,
             "--sheet", out / "sheet.json",
             "--text-a", out / "half_a.txt", "--text-b", out / "half_b.txt",
             "--tokens-a", out / "tokens_a.tsv", "--tokens-b", out / "tokens_b.tsv",
             "--map", out / "bitext.map",
             "--port", str(args.port)]
    if ui_dist.is_dir():
        serve += ["--ui-dir", ui_dist]
    return bilex([str(part) for part in serve])


if __name__ == "__main__":
    sys.exit(main())
