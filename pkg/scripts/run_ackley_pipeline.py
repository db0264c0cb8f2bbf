#!/usr/bin/env python3
"""Full Ackley experiment: data, training, range estimation, oracle check.

Pass --reduced for the desk-scale preset (hidden widths / 4, 300 epochs);
the full run trains for 1000 epochs and takes minutes on a desktop CPU.
"""
import argparse
import sys
from pathlib import Path

from rangesa.cli import main as cli_main


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default="out/ackley")
    parser.add_argument("--seed", type=int, default=7)
    parser.add_argument("--reduced", action="store_true")
    args = parser.parse_args()

    out = Path(args.out)
    seed = str(args.seed)
    epochs = "300" if args.reduced else "1000"
    width_scale = "0.25" if args.reduced else "1.0"

    steps = [
        ["generate-data", "--fn", "ackley", "--m", "2000", "--noise-sd", "0.1",
         "--seed", seed, "--out", str(out)],
        ["train", "--preset", "ackley", "--data", str(out / "ackley_data.csv"),
         "--epochs", epochs, "--width-scale", width_scale, "--seed", seed,
         "--out", str(out)],
        ["estimate-range", "--weights", str(out / "weights.json"),
         "--domain=-4,4,-4,4", "--n-seeds", "5", "--seed", "0",
         "--out", str(out / "range")],
        ["oracle", "--weights", str(out / "weights.json"),
         "--domain=-4,4,-4,4", "--points-per-dim", "801",
         "--out", str(out / "oracle")],
    ]
    for step in steps:
        rc = cli_main(step)
        if rc != 0:
            return rc
    return 0


if __name__ == "__main__":
    sys.exit(main())
