#!/usr/bin/env python3
"""Run the end-to-end synthetic benchmark and print the scorecard.

By default this is the acceptance-scale corpus (~400k characters in half A,
500-type lexicon, 30% cognates, 10% omissions, local permutation). Use the
flags to sweep noise levels or the band width.
"""

import argparse
import sys
from dataclasses import replace

from bilex.benchmark import ACCEPTANCE_CONFIG, BenchmarkConfig, run_benchmark


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--segments", type=int, help="segment count (default: acceptance scale)")
    parser.add_argument("--lexicon-size", type=int)
    parser.add_argument("--cognate-rate", type=float)
    parser.add_argument("--omission-rate", type=float)
    parser.add_argument("--permutation-window", type=int)
    parser.add_argument("--delta", type=float)
    parser.add_argument("--target-recall", type=float)
    parser.add_argument("--seed", type=int)
    args = parser.parse_args()

    synth = ACCEPTANCE_CONFIG.synth
    overrides = {
        "segment_count": args.segments,
        "lexicon_size": args.lexicon_size,
        "cognate_rate": args.cognate_rate,
        "omission_rate": args.omission_rate,
        "permutation_window": args.permutation_window,
        "seed": args.seed,
    }
    synth = replace(synth, **{k: v for k, v in overrides.items() if v is not None})
    config = BenchmarkConfig(
        synth=synth,
        delta=args.delta if args.delta is not None else ACCEPTANCE_CONFIG.delta,
        target_recall=(
            args.target_recall if args.target_recall is not None else ACCEPTANCE_CONFIG.target_recall
        ),
    )
    report = run_benchmark(config)
    print(report.summary())
    ok = report.precision_at_cutoff >= 0.80 and report.recall_at_cutoff >= 0.30
    print("scorecard:", "PASS" if ok else "FAIL")
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
