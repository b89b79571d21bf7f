#!/usr/bin/env python3
"""Two-point violation counts for the reciprocal-gamma Lipschitz bounds."""

import argparse

from rigidsolve.harness import experiments


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--trials", type=int, default=10_000)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--n", type=int, default=2)
    ap.add_argument("--d", type=int, default=3)
    ap.add_argument("--threads", type=int, default=1)
    args = ap.parse_args()

    rec = experiments.lipschitz(args.trials, args.seed, args.n, args.d, args.threads)
    print(experiments.to_csv(rec), end="")


if __name__ == "__main__":
    main()
