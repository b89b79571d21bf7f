"""Condition quantities for rotated polynomial systems.

Given a system F, a tuple u of unitaries, and a projective point z, the
rotated system is (f_1 o u_1^-1, ..., f_n o u_n^-1).  This module computes
the matrix of normalized gradient rows of that system at z, the incidence
condition number kappa (inverse smallest singular value of the row matrix),
the per-equation Frobenius gamma numbers, and their split combination
kappa * sqrt(sum gamma_i^2) that drives the step-size rule of the tracker.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .hpoly import HomogeneousPoly, PolySystem, gradient, taylor_shift, weyl_norm
from .unitary import UnitaryTuple, min_singular_value

__all__ = [
    "DEGENERATE_GRADIENT_FLOOR",
    "LinearizationMatrix",
    "ConditionReport",
    "projective_distance",
    "linearization",
    "kappa",
    "gamma_frob",
    "hat_gamma_frob",
]

DEGENERATE_GRADIENT_FLOOR = 1e-300


def projective_distance(x: np.ndarray, y: np.ndarray) -> float:
    """Geodesic (Fubini-Study) distance arcsin(sqrt(1 - |<x, y>|^2)) between
    projective classes of two vectors.

    The radicand is evaluated as (1 - |c|)(1 + |c|) with 1 - |c| recovered
    from the phase-aligned difference, which keeps nearby points resolvable
    down to machine precision (the naive expression loses everything below
    about 1e-8).
    """
    x = np.asarray(x, dtype=np.complex128)
    y = np.asarray(y, dtype=np.complex128)
    x = x / np.linalg.norm(x)
    y = y / np.linalg.norm(y)
    c = np.vdot(y, x)
    a = abs(c)
    if a == 0.0:
        return float(np.pi / 2.0)
    aligned_gap = float(np.linalg.norm(x - (c / a) * y))
    sin_d = aligned_gap * np.sqrt((1.0 + min(a, 1.0)) / 2.0)
    return float(np.arcsin(min(sin_d, 1.0)))


def _unit_rep(z) -> np.ndarray:
    """Unit-norm representative from a ProjectivePoint or array-like."""
    rep = getattr(z, "rep", z)
    rep = np.asarray(rep, dtype=np.complex128)
    nrm = np.linalg.norm(rep)
    if nrm < DEGENERATE_GRADIENT_FLOOR:
        raise ValueError("cannot normalize a zero vector")
    return rep / nrm


@dataclass(frozen=True)
class LinearizationMatrix:
    """Unit-row matrix of the rotated gradients at z.

    Row i is d_z(f_i o u_i^-1) scaled to unit Euclidean norm; `row_norms`
    keeps the pre-normalization norms and `degenerate` flags rows whose
    gradient vanished (those rows are left as zeros).
    """

    rows: np.ndarray        # (n, n+1) complex
    row_norms: np.ndarray   # (n,) float
    degenerate: np.ndarray  # (n,) bool

    @property
    def well_defined(self) -> bool:
        return not bool(np.any(self.degenerate))


def linearization(F: PolySystem, u: UnitaryTuple, z) -> LinearizationMatrix:
    """Normalized gradient rows of the rotated system at z.

    Each gradient is evaluated at the rotated point u_i* z and carried back
    through u_i, which costs one matrix-vector product per equation.
    """
    zv = _unit_rep(z)
    n, k = F.n, F.n_vars
    rows = np.zeros((n, k), dtype=np.complex128)
    norms = np.zeros(n)
    degenerate = np.zeros(n, dtype=bool)
    for i in range(n):
        y = u[i].conj().T @ zv
        row = np.conj(u[i]) @ gradient(F.polys[i], y)
        nrm = float(np.linalg.norm(row))
        norms[i] = nrm
        if nrm < DEGENERATE_GRADIENT_FLOOR:
            degenerate[i] = True
        else:
            rows[i] = row / nrm
    return LinearizationMatrix(rows=rows, row_norms=norms, degenerate=degenerate)


def kappa(F: PolySystem, u: UnitaryTuple, z) -> float:
    """Incidence condition number: 1 / sigma_min of the unit-row matrix.

    Infinite when a gradient vanishes or the rows are rank deficient.  Values
    below 1 are floating-point noise (a unit-row matrix has sigma_min <= 1)
    and are clamped.
    """
    lin = linearization(F, u, z)
    return _kappa_of(lin)


def _kappa_of(lin: LinearizationMatrix) -> float:
    if not lin.well_defined:
        return float("inf")
    smin = min_singular_value(lin.rows)
    if smin < 1e-150:
        return float("inf")
    return max(1.0 / smin, 1.0)


def gamma_frob(f: HomogeneousPoly, z) -> float:
    """Frobenius-norm variant of the gamma number of a single equation at z.

    With g_k the degree-k component of the shift f(z + x), the value is
    max over 2 <= k <= d of (||g_k||_W / ||g_1||)^(1/(k-1)); ||g_1|| is the
    gradient norm at z.  Infinite for a vanishing gradient, zero for d = 1.
    """
    zv = _unit_rep(z)
    parts = taylor_shift(f, zv)
    grad_norm = float(np.linalg.norm(parts[1].coeffs))
    if grad_norm < DEGENERATE_GRADIENT_FLOOR:
        return float("inf")
    if f.degree < 2:
        return 0.0
    best = 0.0
    for k in range(2, f.degree + 1):
        ratio = weyl_norm(parts[k]) / grad_norm
        best = max(best, ratio ** (1.0 / (k - 1)))
    return best


@dataclass(frozen=True)
class ConditionReport:
    """kappa, per-equation gamma values, and their split combination."""

    kappa: float
    gamma_frob_per_eq: np.ndarray
    hat_gamma_frob: float

    @property
    def g_value(self) -> float:
        """Alias: the quantity used by the tracker's step-size rule."""
        return self.hat_gamma_frob


def hat_gamma_frob(F: PolySystem, u: UnitaryTuple, z) -> ConditionReport:
    """Split condition quantity kappa * sqrt(sum_i gamma_i^2) at (u, z).

    Per-equation values use the unitary invariance gamma(f o u^-1, z) =
    gamma(f, u* z); infinities propagate.
    """
    zv = _unit_rep(z)
    kap = kappa(F, u, zv)
    gammas = np.array([gamma_frob(F.polys[i], u[i].conj().T @ zv) for i in range(F.n)])
    if not np.isfinite(kap) or not np.all(np.isfinite(gammas)):
        hat = float("inf")
    else:
        hat = float(kap * np.sqrt(np.sum(gammas ** 2)))
    return ConditionReport(kappa=kap, gamma_frob_per_eq=gammas, hat_gamma_frob=hat)
