"""Randomized start pairs on the rigid solution variety, adaptive numerical
continuation, and the end-to-end solver.

The solution variety consists of pairs (u, zeta) with zeta a common zero of
the rotated equations f_i o u_i^-1.  `sample_solution_variety` draws such a
pair with the distribution whose marginals make the average-case analysis
work; `numerical_continuation` transports its zero along a unitary path with
the step size 1 / (16 C kappa g); `solve` composes the two.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Literal

import numpy as np

from . import _kernel
from .conditioning import hat_gamma_frob
from .hpoly import PolySystem, gradient, kostlan_system, restrict_to_line
from .seeding import STREAM_STEPS, substream
from .unitary import (ContinuationPath, UnitaryTuple, build_path, evaluate_path,
                      frame_unitary, sample_unitary)
from .zeros import (NewtonFailureError, ProjectivePoint, bivariate_roots,
                    certify_by_contraction, has_near_multiple_root, newton_step,
                    rotated_residuals)

__all__ = [
    "RigidPair",
    "TrackerSettings",
    "ContinuationStats",
    "StepCountSummary",
    "SampleError",
    "sample_solution_variety",
    "numerical_continuation",
    "solve",
    "mean_step_count",
    "LINEAR_GAMMA_FLOOR",
]

# Step-size floor for the degenerate all-linear case, where the split gamma
# quantity is identically zero and the step rule would never terminate.
LINEAR_GAMMA_FLOOR = 1e-3
STEP_UNDERFLOW_REL = 1e-16
SAMPLE_RESIDUAL_TOL = 1e-10
# Callers owe the tracker a refined zero (residual <= 1e-10); the runtime
# guard is looser so that re-running from a tracker output stays legal.
START_RESIDUAL_GUARD = 1e-8
SAMPLE_MAX_RETRIES = 16

Outcome = Literal["success", "step_underflow", "max_steps_exceeded", "newton_failure"]


class SampleError(RuntimeError):
    """Raised when start-pair sampling keeps hitting degenerate draws."""


@dataclass(frozen=True)
class RigidPair:
    """A start pair: rotations u and a common zero zeta of the rotated system."""

    u: UnitaryTuple
    zeta: ProjectivePoint
    residuals: np.ndarray


@dataclass
class TrackerSettings:
    """Continuation parameters.

    The Lipschitz constant C = 15 comes from the 5-Lipschitz bound for the
    reciprocal per-equation gamma, tripled by the coupling with kappa; the
    step denominator is 16 C.  `relaxation_M` multiplies the denominator on
    top of any speed guard measured on the path itself.
    """

    lipschitz_C: float = 15.0
    step_denominator: float | None = None
    relaxation_M: float = 1.0
    max_steps: int = 10_000_000
    path_kind: str = "geodesic"
    use_kernel: bool = True

    def __post_init__(self) -> None:
        if self.lipschitz_C < 10.0:
            raise ValueError("lipschitz_C must be at least 10")
        if self.step_denominator is None:
            self.step_denominator = 16.0 * self.lipschitz_C
        if self.relaxation_M < 1.0:
            raise ValueError("relaxation_M must be at least 1")


@dataclass
class ContinuationStats:
    """What happened during one continuation run.

    `steps_K` counts Newton updates (loop iterations).  The optional trace
    stores (t, kappa, g, z) snapshots taken right after each step-size
    evaluation.
    """

    steps_K: int
    path_length_T: float
    outcome: Outcome
    kappa_g_trace: list[tuple[float, float, float, np.ndarray]] | None = None


def _orthonormal_complement(vectors: list[np.ndarray], dim: int) -> np.ndarray:
    """Orthonormal basis (columns) of the complement of the given unit vectors."""
    proj = np.eye(dim, dtype=np.complex128)
    for v in vectors:
        proj -= np.outer(v, v.conj())
    u, s, _ = np.linalg.svd(proj)
    return u[:, :dim - len(vectors)]


def _adapted_frame(point: np.ndarray, normal: np.ndarray) -> np.ndarray:
    """Columns: the point, an orthonormal basis of the tangent slice
    {point, normal}-perp, then the normal direction."""
    dim = point.shape[0]
    mid = _orthonormal_complement([point, normal], dim)
    return np.column_stack([point, mid, normal])


def sample_solution_variety(F: PolySystem, rng: np.random.Generator) -> RigidPair:
    """Draw (u, zeta) with zeta a zero of every rotated equation.

    Steps: (1) independent Gaussian linear forms cut random hyperplanes h_i;
    (2) zeta is their common (projectively unique) intersection point, with a
    random phase on the representative; (3) each equation gets a uniform zero
    y_i found on a Haar-random line; (4) a frame map carries the adapted frame
    at y_i to the one at zeta; (5) a Haar element of the stabilizer of
    (zeta, h_i) randomizes the remaining freedom.  Degenerate draws (repeated
    line roots, rank-deficient forms) are resampled a bounded number of times.
    """
    n, k = F.n, F.n_vars

    lam = None
    zeta_vec = None
    for _ in range(SAMPLE_MAX_RETRIES):
        cand = (rng.standard_normal((n, k)) + 1j * rng.standard_normal((n, k)))
        _, s, vh = np.linalg.svd(cand)
        if s[-1] > 1e-8:
            lam = cand
            zeta_vec = vh[-1].conj()
            break
    if lam is None:
        raise SampleError("could not draw full-rank linear forms")
    zeta_vec = zeta_vec * np.exp(2j * np.pi * rng.random())

    components = np.empty((n, k, k), dtype=np.complex128)
    for i in range(n):
        f = F.polys[i]
        y = None
        for _ in range(SAMPLE_MAX_RETRIES):
            line = sample_unitary(k, rng)
            p, q = line[:, 0], line[:, 1]
            g = restrict_to_line(f, p, q)
            if g.is_zero:
                continue
            roots = bivariate_roots(g)
            if len(roots) != f.degree or has_near_multiple_root(roots):
                continue
            pick = roots[int(rng.integers(f.degree))].rep
            y = pick[0] * p + pick[1] * q
            y = y / np.linalg.norm(y)
            break
        if y is None:
            raise SampleError(f"equation {i}: repeated degenerate line restrictions")

        grad_y = gradient(f, y)
        gnorm = np.linalg.norm(grad_y)
        if gnorm < 1e-12:
            raise SampleError(f"equation {i}: singular zero on the sampled line")
        normal_y = grad_y.conj() / gnorm

        lam_i = lam[i]
        normal_z = lam_i.conj() / np.linalg.norm(lam_i)
        # make the hyperplane normal orthogonal to zeta exactly (it is up to
        # the SVD's rounding already)
        normal_z = normal_z - np.vdot(normal_z, zeta_vec) * zeta_vec
        normal_z = normal_z / np.linalg.norm(normal_z)

        v_i = frame_unitary(_adapted_frame(y, normal_y),
                            _adapted_frame(zeta_vec, normal_z))

        frame_z = _adapted_frame(zeta_vec, normal_z)
        block = np.zeros((k, k), dtype=np.complex128)
        block[0, 0] = np.exp(2j * np.pi * rng.random())
        if k > 2:
            block[1:k - 1, 1:k - 1] = sample_unitary(k - 2, rng)
        block[k - 1, k - 1] = np.exp(2j * np.pi * rng.random())
        w_i = frame_z @ block @ frame_z.conj().T
        components[i] = w_i @ v_i

    u = UnitaryTuple(components)
    zeta = ProjectivePoint(zeta_vec)
    res = rotated_residuals(F, u, zeta)
    if float(np.max(res)) > SAMPLE_RESIDUAL_TOL:
        raise SampleError(f"start pair residual {np.max(res):.3e} above tolerance")
    return RigidPair(u=u, zeta=zeta, residuals=res)


def _condition_pair(F: PolySystem, w: UnitaryTuple, z_vec: np.ndarray) -> tuple[float, float]:
    """kappa and the step-rule g at (w, z), with the all-linear floor applied."""
    report = hat_gamma_frob(F, w, z_vec)
    g = report.hat_gamma_frob
    if F.max_degree == 1:
        g = max(g, LINEAR_GAMMA_FLOOR)
    return report.kappa, g


def _track_python(F: PolySystem, path: ContinuationPath, z_vec: np.ndarray,
                  settings: TrackerSettings, collect_trace: bool
                  ) -> tuple[np.ndarray, ContinuationStats]:
    T = path.length
    denom = settings.step_denominator * max(settings.relaxation_M, path.relaxation)
    trace: list | None = [] if collect_trace else None

    def step_size(w: UnitaryTuple, z: np.ndarray, t: float) -> float:
        kap, g = _condition_pair(F, w, z)
        if trace is not None:
            trace.append((t, kap, g, z.copy()))
        kg = kap * g
        if not np.isfinite(kg) or kg <= 0.0:
            return 0.0
        return 1.0 / (denom * kg)

    z = z_vec
    K = 0
    t = step_size(path.base, z, 0.0)
    if t < STEP_UNDERFLOW_REL * T:
        return z, ContinuationStats(K, T, "step_underflow", trace)
    outcome: Outcome = "success"
    while True:
        # the last update is clamped to the endpoint, correcting z against
        # the target system itself
        t_eval = min(t, T)
        w = evaluate_path(path, t_eval)
        try:
            z = newton_step(F, w, ProjectivePoint(z)).rep
        except NewtonFailureError:
            outcome = "newton_failure"
            break
        K += 1
        if t >= T:
            break
        step = step_size(w, z, t_eval)
        if step < STEP_UNDERFLOW_REL * T:
            outcome = "step_underflow"
            break
        t += step
        if K >= settings.max_steps and t < T:
            outcome = "max_steps_exceeded"
            break
    return z, ContinuationStats(K, T, outcome, trace)


def numerical_continuation(F: PolySystem, u_target: UnitaryTuple,
                           v_start: UnitaryTuple, z: ProjectivePoint,
                           settings: TrackerSettings | None = None, *,
                           collect_trace: bool = False
                           ) -> tuple[ProjectivePoint, ContinuationStats]:
    """Track the zero z of the v_start-rotated system to the u_target one.

    Builds a path from v_start to u_target, then alternates Newton updates
    with parameter advances of 1 / (16 C kappa g) evaluated at the current
    pair.  Stops when the parameter passes the path length; the result is an
    approximate zero of the target rotated system.
    """
    settings = settings or TrackerSettings()
    start_res = rotated_residuals(F, v_start, z)
    if float(np.max(start_res)) > START_RESIDUAL_GUARD:
        raise ValueError(f"start point residual {np.max(start_res):.3e} is not a "
                         "refined zero of the start system")
    path = build_path(v_start, u_target, settings.path_kind)
    if path.length == 0.0:
        return z, ContinuationStats(0, 0.0, "success", [] if collect_trace else None)

    if (settings.use_kernel and not collect_trace and path.kind == "geodesic"
            and _kernel.AVAILABLE and len(set(F.degrees)) == 1):
        z_vec, K, code = _kernel.track_geodesic(F, path, z.rep, settings,
                                                LINEAR_GAMMA_FLOOR, STEP_UNDERFLOW_REL)
        outcome = _kernel.OUTCOMES[code]
        return ProjectivePoint(z_vec), ContinuationStats(K, path.length, outcome)

    z_vec, stats = _track_python(F, path, z.rep, settings, collect_trace)
    return ProjectivePoint(z_vec), stats


def solve(F: PolySystem, u: UnitaryTuple, rng: np.random.Generator,
          settings: TrackerSettings | None = None
          ) -> tuple[ProjectivePoint, ContinuationStats]:
    """Find one approximate zero of the u-rotated system.

    Samples a start pair on the solution variety, then continues its zero
    along the path from the sampled rotations to u.
    """
    pair = sample_solution_variety(F, rng)
    return numerical_continuation(F, u, pair.u, pair.zeta, settings)


@dataclass
class StepCountSummary:
    """Aggregate of repeated randomized solves on fresh random systems."""

    n: int
    degrees: tuple[int, ...]
    trials: int
    mean_K: float
    stderr_K: float
    per_trial_K: list[int]
    failures: int
    outcomes: list[str] = field(default_factory=list)


def mean_step_count(n: int, degrees: list[int], trials: int, seed: int, *,
                    settings: TrackerSettings | None = None,
                    certify: bool = True,
                    threads: int = 1) -> StepCountSummary:
    """Average continuation step count over fresh random systems.

    Each trial draws its own system from the square-root multinomial Gaussian
    ensemble, solves against the identity rotations, and (optionally)
    certifies the output; uncertified or failed trials count as failures and
    are excluded from the mean.  Per-trial seeds make the result independent
    of threading.
    """
    if trials < 1:
        raise ValueError("need at least one trial")
    settings = settings or TrackerSettings()
    D = max(degrees)

    def one_trial(trial: int) -> tuple[int, str, bool]:
        rng = substream(seed, STREAM_STEPS, n, D, trial)
        F = kostlan_system(n, degrees, rng)
        try:
            z, stats = solve(F, UnitaryTuple.identity(n, n + 1), rng, settings)
        except (SampleError, NewtonFailureError) as exc:  # pragma: no cover
            return 0, f"sample_error:{exc}", False
        ok = stats.outcome == "success"
        if ok and certify:
            cert = certify_by_contraction(F, UnitaryTuple.identity(n, n + 1), z)
            ok = cert.certified
        return stats.steps_K, stats.outcome, ok

    if threads > 1:
        from concurrent.futures import ThreadPoolExecutor
        with ThreadPoolExecutor(max_workers=threads) as ex:
            results = list(ex.map(one_trial, range(trials)))
    else:
        results = [one_trial(t) for t in range(trials)]

    ks = [k for k, _, ok in results if ok]
    failures = trials - len(ks)
    mean = float(np.mean(ks)) if ks else float("nan")
    stderr = float(np.std(ks, ddof=1) / np.sqrt(len(ks))) if len(ks) > 1 else 0.0
    return StepCountSummary(n=n, degrees=tuple(degrees), trials=trials,
                            mean_K=mean, stderr_K=stderr,
                            per_trial_K=[k for k, _, _ in results],
                            failures=failures,
                            outcomes=[o for _, o, _ in results])
