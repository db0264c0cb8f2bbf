#!/usr/bin/env python3
"""Multiple-global-minima experiment in three dimensions."""
import argparse
import sys
from pathlib import Path

from rangesa.cli import main as cli_main


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default="out/multimin")
    parser.add_argument("--seed", type=int, default=13)
    parser.add_argument("--reduced", action="store_true")
    args = parser.parse_args()

    out = Path(args.out)
    seed = str(args.seed)
    epochs = "400" if args.reduced else "1000"
    width_scale = "0.25" if args.reduced else "1.0"

    steps = [
        ["generate-data", "--fn", "multimin", "--m", "4000", "--noise-sd", "0.1",
         "--seed", seed, "--out", str(out)],
        ["train", "--preset", "multimin", "--data", str(out / "multimin_data.csv"),
         "--epochs", epochs, "--width-scale", width_scale, "--seed", seed,
         "--out", str(out)],
        ["estimate-range", "--weights", str(out / "weights.json"),
         "--domain=-3,3,-3,3,-3,3", "--n-seeds", "5", "--seed", "0",
         "--out", str(out / "range")],
        ["oracle", "--weights", str(out / "weights.json"),
         "--domain=-3,3,-3,3,-3,3", "--points-per-dim", "61",
         "--out", str(out / "oracle")],
    ]
    for step in steps:
        rc = cli_main(step)
        if rc != 0:
            return rc
    return 0


if __name__ == "__main__":
    sys.exit(main())
