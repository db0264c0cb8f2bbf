#!/usr/bin/env python3
"""Drop-Wave experiment: data, training, range estimation, oracle check."""
import argparse
import sys
from pathlib import Path

from rangesa.cli import main as cli_main


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default="out/dropwave")
    parser.add_argument("--seed", type=int, default=11)
    parser.add_argument("--reduced", action="store_true")
    args = parser.parse_args()

    out = Path(args.out)
    seed = str(args.seed)
    epochs = "600" if args.reduced else "1000"
    width_scale = "0.25" if args.reduced else "1.0"
    m = "6000" if args.reduced else "2000"

    steps = [
        ["generate-data", "--fn", "dropwave", "--m", m, "--noise-sd", "0.02",
         "--seed", seed, "--out", str(out)],
        ["train", "--preset", "dropwave", "--data", str(out / "dropwave_data.csv"),
         "--epochs", epochs, "--width-scale", width_scale, "--seed", seed,
         "--out", str(out)],
        ["estimate-range", "--weights", str(out / "weights.json"),
         "--domain=-5.12,5.12,-5.12,5.12", "--n-seeds", "5", "--seed", "0",
         "--out", str(out / "range")],
        ["oracle", "--weights", str(out / "weights.json"),
         "--domain=-5.12,5.12,-5.12,5.12", "--points-per-dim", "801",
         "--out", str(out / "oracle")],
    ]
    for step in steps:
        rc = cli_main(step)
        if rc != 0:
            return rc
    return 0


if __name__ == "__main__":
    sys.exit(main())
