#!/usr/bin/env python3
"""Mean continuation step counts over a grid of (n, D) cells."""

import argparse

from rigidsolve.harness import experiments


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n-range", default="1:3")
    ap.add_argument("--d-range", default="2:3")
    ap.add_argument("--trials", type=int, default=100)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--threads", type=int, default=1)
    ap.add_argument("--out", default=None)
    args = ap.parse_args()

    rec = experiments.step_scaling(
        experiments.parse_range(args.n_range), experiments.parse_range(args.d_range),
        args.trials, args.seed, args.threads)
    csv = experiments.to_csv(rec)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(csv)
    print(csv, end="")


if __name__ == "__main__":
    main()
