"""Monte Carlo experiments reproducing the desk-scale quantitative bounds.

Each experiment derives one generator per trial from (seed, stream, trial),
collects per-trial records in trial order, and reduces afterwards, so output
is byte-identical for a fixed seed regardless of the thread count.  CSV cells
carry 17 significant digits.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .. import _kernel
from ..conditioning import gamma_frob, hat_gamma_frob, projective_distance
from ..hpoly import kostlan_sample, kostlan_system, restrict_to_line
from ..rigid import TrackerSettings, mean_step_count
from ..seeding import (STREAM_GAMMA, STREAM_KAPPA, STREAM_LIPSCHITZ, substream)
from ..unitary import (UnitaryTuple, exp_skew, sample_unitary, u_norm,
                       unitary_geodesic_distance)
from ..zeros import bivariate_roots, has_near_multiple_root

__all__ = [
    "ExperimentRecord",
    "to_csv",
    "parse_range",
    "kappa_moment",
    "gamma_moment",
    "step_scaling",
    "lipschitz",
]

GAMMA_LINE_RETRIES = 16


@dataclass
class ExperimentRecord:
    """CSV-shaped result: a header, rows, and raw per-trial samples."""

    header: list[str]
    rows: list[list]
    samples: dict = field(default_factory=dict)


def _cell(x) -> str:
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return format(float(x), ".17g")


def to_csv(record: ExperimentRecord) -> str:
    lines = [",".join(record.header)]
    for row in record.rows:
        lines.append(",".join(_cell(x) for x in row))
    return "\n".join(lines) + "\n"


def _map_trials(fn: Callable[[int], object], trials: int, threads: int) -> list:
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as ex:
            return list(ex.map(fn, range(trials)))
    return [fn(t) for t in range(trials)]


def _mean_stderr(values: np.ndarray) -> tuple[float, float]:
    mean = float(np.mean(values))
    stderr = float(np.std(values, ddof=1) / np.sqrt(len(values))) if len(values) > 1 else 0.0
    return mean, stderr


def kappa_moment(n: int, trials: int, seed: int, threads: int = 1) -> ExperimentRecord:
    """Second moment of the incidence condition number of a random unit-row
    matrix (rows independent, uniform on the unit sphere), against 6 n^2."""
    if trials < 100:
        raise ValueError("need at least 100 trials")

    def one(trial: int) -> float:
        rng = substream(seed, STREAM_KAPPA, n, trial)
        m = rng.standard_normal((n, n + 1)) + 1j * rng.standard_normal((n, n + 1))
        m /= np.linalg.norm(m, axis=1, keepdims=True)
        smin = np.linalg.svd(m, compute_uv=False)[-1]
        return float(1.0 / smin**2)

    vals = np.array(_map_trials(one, trials, threads))
    mean, stderr = _mean_stderr(vals)
    return ExperimentRecord(
        header=["n", "trials", "mean_kappa_sq", "stderr", "bound_6n2"],
        rows=[[n, trials, mean, stderr, 6.0 * n * n]],
        samples={"kappa_sq": vals})


def uniform_zero_on_hypersurface(f, rng: np.random.Generator) -> np.ndarray:
    """Uniform zero of one equation: pick uniformly among the roots on a
    Haar-random line, resampling the line on (measure-zero) degeneracies."""
    k = f.n_vars
    for _ in range(GAMMA_LINE_RETRIES):
        line = sample_unitary(k, rng)
        p, q = line[:, 0], line[:, 1]
        g = restrict_to_line(f, p, q)
        if g.is_zero:
            continue
        roots = bivariate_roots(g)
        if len(roots) != f.degree or has_near_multiple_root(roots):
            continue
        st = roots[int(rng.integers(f.degree))].rep
        y = st[0] * p + st[1] * q
        return y / np.linalg.norm(y)
    raise RuntimeError("persistent degenerate line restrictions")


def gamma_moment(n: int, d: int, trials: int, seed: int, threads: int = 1) -> ExperimentRecord:
    """Second moment of the Frobenius gamma number at a uniform zero of a
    random polynomial, against d^3 (d + n) / 4."""
    if d < 2:
        raise ValueError("degree must be at least 2")

    def one(trial: int) -> float:
        rng = substream(seed, STREAM_GAMMA, n, d, trial)
        f = kostlan_sample(n, d, rng)
        zeta = uniform_zero_on_hypersurface(f, rng)
        return gamma_frob(f, zeta)

    gammas = np.array(_map_trials(one, trials, threads))
    sq = gammas**2
    mean, stderr = _mean_stderr(sq)
    return ExperimentRecord(
        header=["n", "d", "trials", "mean_gamma_sq", "stderr", "bound"],
        rows=[[n, d, trials, mean, stderr, 0.25 * d**3 * (d + n)]],
        samples={"gamma": gammas})


def parse_range(text: str) -> list[int]:
    """'A:B' -> [A..B] inclusive; a single integer is a one-element range."""
    if ":" in text:
        a, b = text.split(":", 1)
        lo, hi = int(a), int(b)
    else:
        lo = hi = int(text)
    if hi < lo:
        raise ValueError(f"empty range {text!r}")
    return list(range(lo, hi + 1))


def step_scaling(n_range: Sequence[int], d_range: Sequence[int], trials: int,
                 seed: int, threads: int = 1,
                 settings: TrackerSettings | None = None) -> ExperimentRecord:
    """Mean continuation step count over random uniform-degree systems, per
    (n, D) cell, with the loose 9000 n^4 D^2 reference bound."""
    _kernel.ensure_compiled()
    rows = []
    summaries = []
    for n in n_range:
        for D in d_range:
            summary = mean_step_count(n, [D] * n, trials, seed,
                                      settings=settings, threads=threads)
            summaries.append(summary)
            rows.append([n, D, trials, summary.mean_K, summary.stderr_K,
                         summary.failures, 9000.0 * n**4 * D**2])
    return ExperimentRecord(
        header=["n", "D", "trials", "mean_K", "stderr", "failures",
                "paper_bound_9000_n4_D2"],
        rows=rows,
        samples={"summaries": summaries})


GAMMA_LIP_CONST = 5.0
HAT_GAMMA_LIP_CONST = 15.0
LIP_SLACK = 1.0 + 1e-6


def _random_unit(k: int, rng: np.random.Generator) -> np.ndarray:
    v = rng.standard_normal(k) + 1j * rng.standard_normal(k)
    return v / np.linalg.norm(v)


def _nearby_point(x: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    # length scales from ~1e-4 up to O(1), mixing local and global checks
    eps = 10.0 ** rng.uniform(-4.0, 0.5)
    v = x + eps * _random_unit(x.shape[0], rng)
    return v / np.linalg.norm(v)


def _inv_or_zero(value: float) -> float:
    return 0.0 if not np.isfinite(value) else (1.0 / value if value > 0 else np.inf)


def lipschitz(trials: int, seed: int, n: int = 2, d: int = 3,
              threads: int = 1) -> ExperimentRecord:
    """Two-point checks of the reciprocal-gamma Lipschitz properties.

    Per trial: (a) |1/gamma(f,x) - 1/gamma(f,y)| <= 5 d(x,y), and (b) the
    same for the split quantity on rotation-point pairs with constant 15 in
    the product metric.  Violations are counted at slack 1 + 1e-6.
    """

    def one(trial: int) -> tuple[int, int]:
        rng = substream(seed, STREAM_LIPSCHITZ, n, d, trial)
        k = n + 1
        f = kostlan_sample(n, d, rng)
        x = _random_unit(k, rng)
        y = _nearby_point(x, rng)
        iva = _inv_or_zero(gamma_frob(f, x))
        ivb = _inv_or_zero(gamma_frob(f, y))
        dist = projective_distance(x, y)
        viol5 = int(abs(iva - ivb) > GAMMA_LIP_CONST * dist * LIP_SLACK)

        F = kostlan_system(n, [d] * n, rng)
        u = UnitaryTuple(np.stack([sample_unitary(k, rng) for _ in range(n)]))
        eps = 10.0 ** rng.uniform(-4.0, 0.0)
        comps = []
        for i in range(n):
            h = rng.standard_normal((k, k)) + 1j * rng.standard_normal((k, k))
            skew = (h - h.conj().T) / 2.0
            skew = skew / max(u_norm(skew), 1e-300)
            comps.append(u[i] @ exp_skew(eps * skew))
        v = UnitaryTuple(np.stack(comps))
        x2 = _random_unit(k, rng)
        y2 = _nearby_point(x2, rng)
        iva2 = _inv_or_zero(hat_gamma_frob(F, u, x2).hat_gamma_frob)
        ivb2 = _inv_or_zero(hat_gamma_frob(F, v, y2).hat_gamma_frob)
        dist2 = np.sqrt(sum(unitary_geodesic_distance(u[i], v[i]) ** 2 for i in range(n))
                        + projective_distance(x2, y2) ** 2)
        viol15 = int(abs(iva2 - ivb2) > HAT_GAMMA_LIP_CONST * dist2 * LIP_SLACK)
        return viol5, viol15

    results = _map_trials(one, trials, threads)
    v5 = sum(r[0] for r in results)
    v15 = sum(r[1] for r in results)
    return ExperimentRecord(
        header=["trials", "n", "d", "violations_inv_gamma_5", "violations_inv_hat_gamma_15"],
        rows=[[trials, n, d, v5, v15]],
        samples={})
