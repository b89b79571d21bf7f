"""Command-line interface.

Subcommands: `solve` runs the randomized solver on a system file and reports
the refined zero; `kappa-moment`, `gamma-moment`, `step-scaling`, and
`lipschitz` emit experiment CSVs.  All randomness comes from --seed, so
repeated invocations are byte-identical.  Exit codes: 0 certified zero,
2 parse error, 3 tracking or certification failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from ..rigid import SampleError, TrackerSettings, solve
from ..seeding import STREAM_CLI, substream
from ..unitary import UnitaryTuple
from ..zeros import certify_by_contraction, rotated_residuals
from . import experiments
from .sysfile import SystemFileError, parse_system

__all__ = ["main", "entry"]


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def _solve_command(args: argparse.Namespace) -> int:
    try:
        text = Path(args.system).read_text(encoding="utf-8")
    except OSError as exc:
        print(f"error: cannot read {args.system}: {exc}", file=sys.stderr)
        return 2
    try:
        F = parse_system(text)
    except SystemFileError as exc:
        print(f"error: {args.system}:{exc.line}: {exc}", file=sys.stderr)
        return 2

    identity = UnitaryTuple.identity(F.n, F.n_vars)
    settings = TrackerSettings(path_kind=args.path, max_steps=args.max_steps)
    rng = substream(args.seed, STREAM_CLI, 0)
    try:
        z, stats = solve(F, identity, rng, settings)
    except SampleError as exc:
        print(f"error: start-pair sampling failed: {exc}", file=sys.stderr)
        return 3

    certified = False
    zero = z
    residuals = rotated_residuals(F, identity, z)
    if stats.outcome == "success":
        cert = certify_by_contraction(F, identity, z, extra_steps=3,
                                      residual_tol=args.tol)
        certified = cert.certified
        if cert.certified:
            zero = cert.refined
            residuals = cert.final_residuals

    if args.json:
        payload = {
            "system": str(args.system),
            "n": F.n,
            "degrees": list(F.degrees),
            "seed": args.seed,
            "path": args.path,
            "outcome": stats.outcome,
            "steps": stats.steps_K,
            "path_length": stats.path_length_T,
            "certified": certified,
            "zero": [[float(c.real), float(c.imag)] for c in zero.rep],
            "residuals": [float(r) for r in residuals],
        }
        print(json.dumps(payload, sort_keys=True))
    else:
        print(f"system: {args.system} (n={F.n}, degrees={' '.join(map(str, F.degrees))})")
        print(f"seed: {args.seed}")
        print(f"path: {args.path}")
        print(f"outcome: {stats.outcome}")
        print(f"steps: {stats.steps_K}")
        print(f"path_length: {_fmt(stats.path_length_T)}")
        for j, c in enumerate(zero.rep):
            print(f"zero[{j}]: {_fmt(c.real)} {_fmt(c.imag)}")
        for j, r in enumerate(residuals):
            print(f"residual[{j}]: {_fmt(r)}")
        print(f"certified: {str(certified).lower()}")
    return 0 if certified else 3


def _emit(record: experiments.ExperimentRecord, out: str | None) -> int:
    csv = experiments.to_csv(record)
    if out:
        Path(out).write_text(csv, encoding="utf-8")
    sys.stdout.write(csv)
    return 0


def _kappa_command(args: argparse.Namespace) -> int:
    return _emit(experiments.kappa_moment(args.n, args.trials, args.seed,
                                          args.threads), args.out)


def _gamma_command(args: argparse.Namespace) -> int:
    return _emit(experiments.gamma_moment(args.n, args.d, args.trials, args.seed,
                                          args.threads), args.out)


def _steps_command(args: argparse.Namespace) -> int:
    return _emit(experiments.step_scaling(
        experiments.parse_range(args.n_range), experiments.parse_range(args.d_range),
        args.trials, args.seed, args.threads), args.out)


def _lipschitz_command(args: argparse.Namespace) -> int:
    return _emit(experiments.lipschitz(args.trials, args.seed, args.n, args.d,
                                       args.threads), args.out)


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="rigidsolve",
        description="Homotopy continuation along rigid unitary paths")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="solve a system file for one zero")
    p.add_argument("--system", required=True, help="path to a polysys file")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tol", type=float, default=1e-8,
                   help="certification residual tolerance")
    p.add_argument("--path", choices=["geodesic", "householder"], default="geodesic")
    p.add_argument("--max-steps", type=int, default=10_000_000)
    p.add_argument("--json", action="store_true")
    p.set_defaults(fn=_solve_command)

    p = sub.add_parser("kappa-moment", help="second moment of the incidence condition number")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--trials", type=int, default=10_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--out")
    p.set_defaults(fn=_kappa_command)

    p = sub.add_parser("gamma-moment", help="second moment of the gamma number at a uniform zero")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--out")
    p.set_defaults(fn=_gamma_command)

    p = sub.add_parser("step-scaling", help="mean continuation steps per (n, D) cell")
    p.add_argument("--n-range", required=True, help="A:B inclusive")
    p.add_argument("--d-range", required=True, help="A:B inclusive")
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--out")
    p.set_defaults(fn=_steps_command)

    p = sub.add_parser("lipschitz", help="two-point reciprocal-gamma Lipschitz checks")
    p.add_argument("--trials", type=int, default=10_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--d", type=int, default=3)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--out")
    p.set_defaults(fn=_lipschitz_command)

    args = parser.parse_args(argv)
    return args.fn(args)


def entry() -> None:
    raise SystemExit(main())
