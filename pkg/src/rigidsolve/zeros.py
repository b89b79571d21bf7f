"""Projective Newton iteration, bivariate root-finding, and zero certification.

The Newton operator restricts the Jacobian to the orthogonal complement of the
current representative by solving a bordered square system whose last row pins
the update to that complement.  Certification is a practical surrogate for the
formal approximate-zero property: it checks that extra Newton steps contract
at least geometrically and that the limit point has a tiny residual.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .conditioning import projective_distance
from .hpoly import HomogeneousPoly, PolySystem, evaluate, gradient, weyl_norm
from .unitary import UnitaryTuple

__all__ = [
    "ProjectivePoint",
    "CertificateResult",
    "NewtonFailureError",
    "newton_step",
    "bivariate_roots",
    "has_near_multiple_root",
    "certify_by_contraction",
    "rotated_residuals",
]

BORDERED_COND_LIMIT = 1e14
ROOT_POLISH_TOL = 1e-14
ROOT_POLISH_MAX_ITERS = 60
CONTRACTION_FLOOR = 1e-14
CONTRACTION_RATIO_LIMIT = 0.5 + 1e-6


class NewtonFailureError(RuntimeError):
    """Raised when the bordered Newton system is numerically singular."""


@dataclass(frozen=True)
class ProjectivePoint:
    """A point of projective space held as a unit-norm representative."""

    rep: np.ndarray

    def __post_init__(self) -> None:
        rep = np.asarray(self.rep, dtype=np.complex128)
        nrm = np.linalg.norm(rep)
        if not np.isfinite(nrm) or nrm < 1e-300:
            raise ValueError("representative must be a nonzero finite vector")
        object.__setattr__(self, "rep", rep / nrm)

    def distance_to(self, other: "ProjectivePoint") -> float:
        return projective_distance(self.rep, other.rep)


def _solve_bordered(rows: np.ndarray, values: np.ndarray, zv: np.ndarray) -> np.ndarray:
    """Solve [J; z*] delta = [F(z); 0]; the border row forces delta into z-perp."""
    k = zv.shape[0]
    bordered = np.empty((k, k), dtype=np.complex128)
    bordered[:-1] = rows
    bordered[-1] = zv.conj()
    rhs = np.concatenate([values, [0.0 + 0.0j]])
    u, s, vh = np.linalg.svd(bordered)
    if s[-1] <= 0.0 or s[0] / s[-1] > BORDERED_COND_LIMIT:
        raise NewtonFailureError("bordered Newton system is numerically singular")
    return vh.conj().T @ ((u.conj().T @ rhs) / s)


def newton_step(F: PolySystem, u: UnitaryTuple, z: ProjectivePoint) -> ProjectivePoint:
    """One projective Newton step for the rotated system at z.

    The update solves the Jacobian restricted to the orthogonal complement of
    the representative and renormalizes.  Linear systems are solved exactly in
    one step; a zero of the system is a fixed point.
    """
    zv = z.rep
    n, k = F.n, F.n_vars
    rows = np.empty((n, k), dtype=np.complex128)
    values = np.empty(n, dtype=np.complex128)
    for i in range(n):
        y = u[i].conj().T @ zv
        values[i] = evaluate(F.polys[i], y)
        rows[i] = np.conj(u[i]) @ gradient(F.polys[i], y)
    delta = _solve_bordered(rows, values, zv)
    return ProjectivePoint(zv - delta)


def _polish_bivariate(g: HomogeneousPoly, pt: np.ndarray) -> np.ndarray:
    """Newton-refine a projective root of a bivariate form until the step
    drops below ROOT_POLISH_TOL (or the iteration budget runs out)."""
    z = pt / np.linalg.norm(pt)
    for _ in range(ROOT_POLISH_MAX_ITERS):
        w = np.array([-np.conj(z[1]), np.conj(z[0])])
        dg = gradient(g, z) @ w
        if dg == 0:
            break
        step = evaluate(g, z) / dg
        z_new = z - step * w
        nrm = np.linalg.norm(z_new)
        if nrm < 1e-300 or not np.all(np.isfinite(z_new)):
            break
        z_new = z_new / nrm
        if projective_distance(z, z_new) < ROOT_POLISH_TOL:
            z = z_new
            break
        z = z_new
    return z


def bivariate_roots(g: HomogeneousPoly) -> list[ProjectivePoint]:
    """All deg(g) projective roots of a bivariate form, with multiplicity.

    Finite roots come from companion-matrix eigenvalues of the dehomogenized
    polynomial; a drop of k in the effective degree contributes k copies of
    [0 : 1].  Every root is Newton-polished on the projective line.
    """
    if g.n_vars != 2:
        raise ValueError("expected a bivariate polynomial")
    if g.is_zero:
        raise ValueError("polynomial is identically zero")
    d = g.degree
    # canonical order lists s^d, s^(d-1) t, ..., t^d; c[m] is the t^m coefficient
    c = g.coeffs
    scale = float(np.max(np.abs(c)))
    deg_eff = d
    while deg_eff > 0 and abs(c[deg_eff]) <= 1e-14 * scale:
        deg_eff -= 1
    raw: list[np.ndarray] = []
    for _ in range(d - deg_eff):
        raw.append(np.array([0.0, 1.0], dtype=np.complex128))
    if deg_eff > 0:
        finite = np.roots(c[:deg_eff + 1][::-1])
        for t in finite:
            raw.append(np.array([1.0, t], dtype=np.complex128))
    elif deg_eff == 0 and d == 0:
        raise ValueError("constant polynomial has no roots")
    return [ProjectivePoint(_polish_bivariate(g, pt)) for pt in raw]


def has_near_multiple_root(points: list[ProjectivePoint], tol: float = 1e-7) -> bool:
    """True if any two returned roots are closer than tol (repeated roots
    signal a multiplicity; callers resample their random line)."""
    for i in range(len(points)):
        for j in range(i + 1, len(points)):
            if points[i].distance_to(points[j]) < tol:
                return True
    return False


def rotated_residuals(F: PolySystem, u: UnitaryTuple, z: ProjectivePoint) -> np.ndarray:
    """Per-equation |f_i(u_i^-1 z)| / ||f_i||_W at the unit representative."""
    zv = z.rep
    out = np.empty(F.n)
    for i in range(F.n):
        y = u[i].conj().T @ zv
        out[i] = abs(evaluate(F.polys[i], y)) / weyl_norm(F.polys[i])
    return out


@dataclass(frozen=True)
class CertificateResult:
    """Outcome of the contraction-based certification.

    `contraction_ratios` holds successive quotients of the Newton step sizes
    (zeroed once the steps fall below the floor); `final_residuals` are the
    normalized residuals at the last iterate, which also serves as the
    refined zero.
    """

    certified: bool
    contraction_ratios: np.ndarray
    final_residuals: np.ndarray
    refined: ProjectivePoint


def certify_by_contraction(F: PolySystem, u: UnitaryTuple, z: ProjectivePoint,
                           extra_steps: int = 3, *,
                           residual_tol: float = 1e-8) -> CertificateResult:
    """Certify z as an approximate zero of the rotated system.

    Runs `extra_steps` Newton iterations, requiring each consecutive
    projective step to be at most half the previous one (down to a 1e-14
    floor) and the final iterate's residuals to be below `residual_tol`.
    Newton failure yields an uncertified result.
    """
    pts = [z]
    failed = False
    for _ in range(extra_steps):
        try:
            pts.append(newton_step(F, u, pts[-1]))
        except NewtonFailureError:
            failed = True
            break
    dists = np.array([pts[i].distance_to(pts[i + 1]) for i in range(len(pts) - 1)])
    ratios = np.zeros(max(len(dists) - 1, 0))
    for i in range(len(ratios)):
        if dists[i] > CONTRACTION_FLOOR:
            ratios[i] = dists[i + 1] / dists[i]
    residuals = rotated_residuals(F, u, pts[-1])
    certified = (not failed
                 and len(pts) == extra_steps + 1
                 and bool(np.all(ratios <= CONTRACTION_RATIO_LIMIT))
                 and float(np.max(residuals)) <= residual_tol)
    return CertificateResult(certified=certified, contraction_ratios=ratios,
                             final_residuals=residuals, refined=pts[-1])
