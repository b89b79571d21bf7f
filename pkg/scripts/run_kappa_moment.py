#!/usr/bin/env python3
"""Second moment of the incidence condition number vs the 6 n^2 bound."""

import argparse

from rigidsolve.harness import experiments


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n-range", default="2:8", help="A:B inclusive")
    ap.add_argument("--trials", type=int, default=10_000)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--threads", type=int, default=1)
    args = ap.parse_args()

    rows = []
    header = None
    for n in experiments.parse_range(args.n_range):
        rec = experiments.kappa_moment(n, args.trials, args.seed, args.threads)
        header = rec.header
        rows.extend(rec.rows)
    print(experiments.to_csv(experiments.ExperimentRecord(header, rows)), end="")


if __name__ == "__main__":
    main()
