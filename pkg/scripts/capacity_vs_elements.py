#!/usr/bin/env python3
"""Ergodic capacity versus RIS element count.

Sweeps M over a log-ish grid at the default scenario and prints the CSV,
optionally cross-checked against the Monte-Carlo estimator per point.

    python scripts/capacity_vs_elements.py
    python scripts/capacity_vs_elements.py --with-mc --trials 200000 --out m_sweep.csv
"""

import argparse
import sys

from thzris.cli import main as cli_main


def parse_args():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--values", default="1,4,16,64,100,256,1024",
                        help="comma-separated element counts")
    parser.add_argument("--config", help="scenario file (defaults if omitted)")
    parser.add_argument("--with-mc", action="store_true")
    parser.add_argument("--trials", type=int, default=100_000)
    parser.add_argument("--out", help="output CSV path (stdout if omitted)")
    return parser.parse_args()


def main():
    args = parse_args()
    argv = ["sweep", "--param", "M", "--values", args.values]
    if args.config:
        argv += ["--config", args.config]
    if args.with_mc:
        argv += ["--with-mc", "--trials", str(args.trials)]
    if args.out:
        argv += ["--out", args.out]
    return cli_main(argv)


if __name__ == "__main__":
    sys.exit(main())
