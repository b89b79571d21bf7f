#!/usr/bin/env python3
"""Second moment of the Frobenius gamma number at uniform zeros."""

import argparse

from rigidsolve.harness import experiments


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n-range", default="2:3")
    ap.add_argument("--d-range", default="2:4")
    ap.add_argument("--trials", type=int, default=1000)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--threads", type=int, default=1)
    args = ap.parse_args()

    rows = []
    header = None
    for n in experiments.parse_range(args.n_range):
        for d in experiments.parse_range(args.d_range):
            rec = experiments.gamma_moment(n, d, args.trials, args.seed, args.threads)
            header = rec.header
            rows.extend(rec.rows)
    print(experiments.to_csv(experiments.ExperimentRecord(header, rows)), end="")


if __name__ == "__main__":
    main()
