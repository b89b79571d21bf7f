"""Complex unitary linear algebra: Haar sampling, rank-one rotations, matrix
logarithms, and continuation paths over tuples of unitary matrices.

The metric used throughout is ||A||_u = ||A||_Frob / sqrt(2); tuple norms are
root-sum-square over components.  Paths are immutable after construction.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
import scipy.linalg

__all__ = [
    "UnitaryTuple",
    "ContinuationPath",
    "HouseholderFactors",
    "sample_unitary",
    "haar_tuple",
    "rank_one_rotation",
    "householder_phase_decompose",
    "reconstruct_householder",
    "log_unitary",
    "exp_skew",
    "u_norm",
    "unitarity_defect",
    "build_path",
    "evaluate_path",
    "min_singular_value",
    "frame_unitary",
    "unitary_geodesic_distance",
    "tuple_geodesic_distance",
]

UNITARITY_TOL = 1e-10
FRAME_TOL = 1e-10


def u_norm(a: np.ndarray) -> float:
    """Frobenius norm scaled by 1/sqrt(2)."""
    return float(np.linalg.norm(a) / np.sqrt(2.0))


def unitarity_defect(m: np.ndarray) -> float:
    """||m* m - I||_Frob, zero for exactly unitary m."""
    k = m.shape[0]
    return float(np.linalg.norm(m.conj().T @ m - np.eye(k)))


@dataclass(frozen=True)
class UnitaryTuple:
    """A tuple of unitary matrices of equal size, stored as an (n, k, k) array."""

    components: np.ndarray

    def __post_init__(self) -> None:
        c = np.ascontiguousarray(np.asarray(self.components, dtype=np.complex128))
        if c.ndim != 3 or c.shape[1] != c.shape[2]:
            raise ValueError(f"expected (n, k, k) components, got shape {c.shape}")
        object.__setattr__(self, "components", c)

    @classmethod
    def identity(cls, n: int, dim: int) -> "UnitaryTuple":
        return cls(np.broadcast_to(np.eye(dim, dtype=np.complex128), (n, dim, dim)).copy())

    @classmethod
    def from_matrices(cls, mats: Sequence[np.ndarray]) -> "UnitaryTuple":
        return cls(np.stack([np.asarray(m, dtype=np.complex128) for m in mats]))

    @property
    def n(self) -> int:
        return self.components.shape[0]

    @property
    def dim(self) -> int:
        return self.components.shape[1]

    def __getitem__(self, i: int) -> np.ndarray:
        return self.components[i]

    def compose(self, other: "UnitaryTuple") -> "UnitaryTuple":
        """Componentwise product self_i @ other_i."""
        return UnitaryTuple(self.components @ other.components)

    def inverse(self) -> "UnitaryTuple":
        return UnitaryTuple(self.components.conj().transpose(0, 2, 1))

    def max_unitarity_defect(self) -> float:
        return max(unitarity_defect(self.components[i]) for i in range(self.n))


def sample_unitary(k: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-uniform k x k unitary: Q factor of a complex Gaussian matrix with
    the diagonal of R normalized to nonnegative reals."""
    if k < 1:
        raise ValueError("dimension must be positive")
    for _ in range(8):
        z = (rng.standard_normal((k, k)) + 1j * rng.standard_normal((k, k))) / np.sqrt(2.0)
        q, r = np.linalg.qr(z)
        d = np.diagonal(r)
        if np.min(np.abs(d)) > 1e-12:
            return q * (d / np.abs(d))[None, :]
    raise RuntimeError("repeated numerical rank deficiency in Gaussian sampling")


def haar_tuple(n: int, dim: int, rng: np.random.Generator) -> UnitaryTuple:
    """Tuple of n independent Haar-uniform dim x dim unitaries."""
    return UnitaryTuple(np.stack([sample_unitary(dim, rng) for _ in range(n)]))


def rank_one_rotation(l: np.ndarray, theta: float) -> np.ndarray:
    """I + (e^(i theta) - 1) l l* for a unit vector l: rotates the line spanned
    by l by the phase theta and fixes its orthogonal complement."""
    l = np.asarray(l, dtype=np.complex128)
    if abs(np.linalg.norm(l) - 1.0) > UNITARITY_TOL:
        raise ValueError("rotation line must be a unit vector")
    k = l.shape[0]
    return np.eye(k, dtype=np.complex128) + (np.exp(1j * theta) - 1.0) * np.outer(l, l.conj())


@dataclass(frozen=True)
class HouseholderFactors:
    """Reflection factorization m = e^(i alpha) R(l_1, pi) ... R(l_(k-1), pi) D
    with D = diag(e^(i delta_j)).

    A global phase together with k-1 reflection lines cannot reach a full
    neighborhood of U(k) (parameter count 2k(k-1)/... falls short already for
    k = 2), so the residual diagonal phases are kept explicitly; alpha is
    reported as 0 and the diagonal carries all the phase content.
    """

    alpha: float
    lines: np.ndarray        # (k-1, k), unit rows
    diag_phases: np.ndarray  # (k,), principal values in (-pi, pi]


def householder_phase_decompose(m: np.ndarray) -> HouseholderFactors:
    """Reflection factorization of a unitary matrix (see HouseholderFactors).

    Columns are processed left to right; a column already phase-aligned with
    its target axis emits the coordinate line itself, which later steps and
    the diagonal absorb.
    """
    m = np.asarray(m, dtype=np.complex128)
    k = m.shape[0]
    a = m.copy()
    lines = np.zeros((k - 1, k), dtype=np.complex128)
    for j in range(k - 1):
        c = a[:, j].copy()
        cj = c[j]
        phase = cj / abs(cj) if abs(cj) > 1e-300 else 1.0
        v = c
        v[j] += phase
        lv = v / np.linalg.norm(v)
        lines[j] = lv
        a -= 2.0 * np.outer(lv, lv.conj() @ a)
    phases = np.angle(np.diagonal(a))
    phases = np.where(phases <= -np.pi, np.pi, phases)
    return HouseholderFactors(alpha=0.0, lines=lines, diag_phases=phases)


def reconstruct_householder(factors: HouseholderFactors) -> np.ndarray:
    """Multiply the factorization back into a matrix."""
    k = factors.diag_phases.shape[0]
    out = np.diag(np.exp(1j * factors.diag_phases)).astype(np.complex128)
    for l in factors.lines[::-1]:
        out -= 2.0 * np.outer(l, l.conj() @ out)
    return np.exp(1j * factors.alpha) * out


def log_unitary(m: np.ndarray) -> np.ndarray:
    """Principal skew-Hermitian logarithm of a unitary matrix.

    Eigenphases are taken in (-pi, pi], with -pi mapped to +pi.  Computed by
    a complex Schur decomposition, which is diagonal for normal input.
    """
    m = np.asarray(m, dtype=np.complex128)
    if m.shape == (1, 1):
        theta = float(np.angle(m[0, 0]))
        if theta <= -np.pi:
            theta = np.pi
        return np.array([[1j * theta]], dtype=np.complex128)
    t, q = scipy.linalg.schur(m, output="complex")
    theta = np.angle(np.diagonal(t))
    theta = np.where(theta <= -np.pi, np.pi, theta)
    a = (q * (1j * theta)[None, :]) @ q.conj().T
    return (a - a.conj().T) / 2.0


def exp_skew(a: np.ndarray) -> np.ndarray:
    """Matrix exponential of a skew-Hermitian matrix via Hermitian eigendecomposition."""
    a = np.asarray(a, dtype=np.complex128)
    w, v = np.linalg.eigh(a / 1j)
    return (v * np.exp(1j * w)[None, :]) @ v.conj().T


def min_singular_value(m: np.ndarray) -> float:
    """Smallest singular value of an r x c matrix with r <= c (0 if rank-deficient)."""
    m = np.asarray(m, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] > m.shape[1]:
        raise ValueError(f"expected r <= c matrix, got shape {m.shape}")
    s = np.linalg.svd(m, compute_uv=False)
    return float(s[-1])


def frame_unitary(from_frame: np.ndarray, to_frame: np.ndarray) -> np.ndarray:
    """The unitary mapping the j-th column of from_frame to the j-th column of
    to_frame, for two orthonormal column frames."""
    a = np.asarray(from_frame, dtype=np.complex128)
    b = np.asarray(to_frame, dtype=np.complex128)
    k = a.shape[0]
    if a.shape != (k, k) or b.shape != (k, k):
        raise ValueError("frames must be square matrices of matching size")
    if unitarity_defect(a) > FRAME_TOL * k or unitarity_defect(b) > FRAME_TOL * k:
        raise ValueError("frame columns are not orthonormal")
    return b @ a.conj().T


def unitary_geodesic_distance(a: np.ndarray, b: np.ndarray) -> float:
    """Riemannian distance ||log(a* b)||_u in the scaled Frobenius metric."""
    return u_norm(log_unitary(np.asarray(a).conj().T @ np.asarray(b)))


def tuple_geodesic_distance(a: UnitaryTuple, b: UnitaryTuple) -> float:
    """Product-metric distance: root-sum-square of component distances."""
    return float(np.sqrt(sum(
        unitary_geodesic_distance(a[i], b[i]) ** 2 for i in range(a.n))))


@dataclass(frozen=True)
class ContinuationPath:
    """A precomputed path t -> w_t in the product unitary group, t in [0, length].

    Construction consumes only the relative motions v_i* u_i, so the path is
    left-invariant; total length never exceeds 4n.  `relaxation` is the
    measured speed guard by which a tracker must divide its steps (1 for
    geodesics, which have unit speed by construction).
    """

    kind: str
    base: UnitaryTuple
    target: UnitaryTuple
    length: float
    speeds: np.ndarray
    relaxation: float = 1.0
    # geodesic data: w_i(t) = (v_i Q_i) diag(exp(i t/T phases_i)) Q_i*
    gd_vq: np.ndarray | None = None
    gd_qh: np.ndarray | None = None
    gd_phases: np.ndarray | None = None
    # reflection data: w_i(t) = v_i prod_j R(l_ij, t/T pi) diag(exp(i t/T deltas_i))
    hh_lines: np.ndarray | None = None
    hh_alpha: np.ndarray | None = None
    hh_deltas: np.ndarray | None = None


def build_path(v: UnitaryTuple, u: UnitaryTuple, kind: str = "geodesic") -> ContinuationPath:
    """Continuation path from v to u.

    Geodesic paths follow the principal logarithm of each relative motion and
    have exactly unit speed in the product metric.  Reflection ("householder")
    paths sweep the factorization angles linearly; their top speed is measured
    on a 64-point grid and stored as the relaxation guard.
    """
    if v.n != u.n or v.dim != u.dim:
        raise ValueError("endpoint tuples have mismatched shapes")
    n, k = v.n, v.dim
    rel = np.stack([v[i].conj().T @ u[i] for i in range(n)])

    if kind == "geodesic":
        vq = np.empty((n, k, k), dtype=np.complex128)
        qh = np.empty((n, k, k), dtype=np.complex128)
        phases = np.empty((n, k))
        for i in range(n):
            if k == 1:
                q = np.eye(1, dtype=np.complex128)
                theta = np.angle(rel[i]).reshape(1)
            else:
                t, q = scipy.linalg.schur(rel[i], output="complex")
                theta = np.angle(np.diagonal(t))
            theta = np.where(theta <= -np.pi, np.pi, theta)
            vq[i] = v[i] @ q
            qh[i] = q.conj().T
            phases[i] = theta
        speeds = np.sqrt(0.5 * np.sum(phases ** 2, axis=1))
        length = float(np.sqrt(np.sum(speeds ** 2)))
        path = ContinuationPath(kind="geodesic", base=v, target=u, length=length,
                                speeds=speeds, gd_vq=vq, gd_qh=qh, gd_phases=phases)
    elif kind == "householder":
        lines = np.empty((n, k - 1, k), dtype=np.complex128)
        alphas = np.empty(n)
        deltas = np.empty((n, k))
        for i in range(n):
            fac = householder_phase_decompose(rel[i])
            lines[i] = fac.lines
            alphas[i] = fac.alpha
            deltas[i] = fac.diag_phases
        speeds = np.sqrt(0.5 * (alphas ** 2 + (k - 1) * np.pi ** 2
                                + np.sum(deltas ** 2, axis=1)))
        length = float(np.sqrt(np.sum(speeds ** 2)))
        path = ContinuationPath(kind="householder", base=v, target=u, length=length,
                                speeds=speeds, hh_lines=lines, hh_alpha=alphas,
                                hh_deltas=deltas)
        if length > 0:
            lam = _measured_max_speed(path)
            path = ContinuationPath(kind="householder", base=v, target=u, length=length,
                                    speeds=speeds, relaxation=max(1.0, lam),
                                    hh_lines=lines, hh_alpha=alphas, hh_deltas=deltas)
    else:
        raise ValueError(f"unknown path kind {kind!r}")

    # Total length stays below 4n: each squared component speed is at most
    # (n+1) pi^2 / 2 on geodesics and (2n+1) pi^2 / 2 on reflection paths.
    assert path.length <= 4.0 * n + 1e-9, "path length bound violated"
    if path.length <= 1e-12:
        # coincident endpoints up to rounding: report the constant path
        return ContinuationPath(kind=path.kind, base=v, target=u, length=0.0,
                                speeds=np.zeros(n))
    return path


def _measured_max_speed(path: ContinuationPath, grid: int = 64) -> float:
    t_total = path.length
    h = t_total * 1e-7
    top = 0.0
    for j in range(grid):
        t = t_total * (j + 0.5) / grid
        a = evaluate_path(path, t - h / 2).components
        b = evaluate_path(path, t + h / 2).components
        speed = np.sqrt(sum(u_norm(b[i] - a[i]) ** 2 for i in range(path.base.n))) / h
        top = max(top, float(speed))
    return top


def evaluate_path(path: ContinuationPath, t: float) -> UnitaryTuple:
    """The tuple w_t at parameter t in [0, length]."""
    t_total = path.length
    if t < -1e-12 or t > t_total + max(1e-9, 1e-12 * t_total):
        raise ValueError(f"parameter {t} outside [0, {t_total}]")
    if t_total == 0.0:
        return path.base
    s = min(max(t, 0.0), t_total) / t_total

    if path.kind == "geodesic":
        rot = np.exp(1j * s * path.gd_phases)
        w = np.einsum("nij,nj,njl->nil", path.gd_vq, rot, path.gd_qh)
        return UnitaryTuple(w)

    n, k = path.base.n, path.base.dim
    w = np.empty((n, k, k), dtype=np.complex128)
    phase_step = np.exp(1j * s * np.pi) - 1.0
    for i in range(n):
        acc = path.base[i].copy()
        for l in path.hh_lines[i]:
            acc += phase_step * np.outer(acc @ l, l.conj())
        acc *= np.exp(1j * (s * path.hh_alpha[i] + s * path.hh_deltas[i]))[None, :]
        w[i] = acc
    return UnitaryTuple(w)
