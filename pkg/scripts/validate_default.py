#!/usr/bin/env python3
"""Analytic-versus-simulation validation at several panel sizes.

Runs the `validate` command for the default scenario and a few element
counts; exits non-zero if any point fails its 5% agreement rule.

    python scripts/validate_default.py --trials 1000000
"""

import argparse
import sys
import tempfile
from pathlib import Path

from thzris.cli import EXIT_OK, main as cli_main


def parse_args():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--trials", type=int, default=1_000_000)
    parser.add_argument("--seed", type=int, default=314159)
    parser.add_argument("--elements", default="16,64,100",
                        help="comma-separated element counts to validate")
    return parser.parse_args()


def main():
    args = parse_args()
    worst = EXIT_OK
    with tempfile.TemporaryDirectory() as tmp:
        for m in [None] + [int(v) for v in args.elements.split(",")]:
            label = "default" if m is None else f"M={m}"
            cfg = Path(tmp) / f"{label}.cfg"
            cfg.write_text("" if m is None else f"ris.M = {m}\n")
            print(f"# {label}", flush=True)
            code = cli_main([
                "validate", "--config", str(cfg),
                "--trials", str(args.trials), "--seed", str(args.seed),
            ])
            worst = max(worst, code)
    return worst


if __name__ == "__main__":
    sys.exit(main())
