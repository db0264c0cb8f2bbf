#!/usr/bin/env python3
"""Compare reflected and classical boundary handling on the Ackley function.

Runs matched annealing chains per seed under both proposal modes and prints
the summary table written by the compare subcommand.
"""
import argparse
import sys
from pathlib import Path

from rangesa.cli import main as cli_main


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default="out/compare")
    parser.add_argument("--n-seeds", type=int, default=20)
    parser.add_argument("--variance", type=float, default=4.0)
    args = parser.parse_args()

    out = Path(args.out)
    rc = cli_main([
        "compare", "--fn", "ackley", "--domain=-4,4,-4,4",
        "--n-seeds", str(args.n_seeds), "--seed", "0",
        "--variance", str(args.variance),
        "--out", str(out),
    ])
    if rc != 0:
        return rc
    print((out / "compare_summary.csv").read_text(), end="")
    return 0


if __name__ == "__main__":
    sys.exit(main())
