"""Dense homogeneous polynomial arithmetic over the complex numbers.

Coefficient vectors are indexed by exponent tuples of a fixed total degree in
graded reverse-lexicographic order, leading term first (see `exponents`).
This order is frozen: the on-disk system format and every operation below
rely on it.  All operations are pure; random sampling takes an explicit
generator, so values can be shared freely across threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Mapping, Sequence

import numpy as np
import scipy.sparse as sparse

__all__ = [
    "HomogeneousPoly",
    "PolySystem",
    "exponents",
    "monomial_count",
    "monomial_index",
    "weyl_weights",
    "evaluate",
    "gradient",
    "weyl_norm",
    "taylor_shift",
    "restrict_to_line",
    "kostlan_sample",
    "kostlan_system",
]

FRAME_TOL = 1e-10


def monomial_count(n_vars: int, degree: int) -> int:
    """Number of monomials of total `degree` in `n_vars` variables."""
    return math.comb(degree + n_vars - 1, n_vars - 1)


def _compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    if parts == 1:
        yield (total,)
        return
    for head in range(total + 1):
        for tail in _compositions(total - head, parts - 1):
            yield (head,) + tail


@lru_cache(maxsize=None)
def exponents(n_vars: int, degree: int) -> np.ndarray:
    """Exponent rows, shape (M, n_vars), in graded reverse-lexicographic order.

    Within the fixed total degree, tuple a precedes tuple b iff the last
    nonzero entry of a - b is negative; equivalently, reversed tuples sort
    ascending.  For two variables this lists s^d, s^(d-1) t, ..., t^d.
    """
    rows = sorted(_compositions(degree, n_vars), key=lambda a: a[::-1])
    arr = np.array(rows, dtype=np.int64).reshape(len(rows), n_vars)
    arr.setflags(write=False)
    return arr


@lru_cache(maxsize=None)
def _exponent_index(n_vars: int, degree: int) -> dict[tuple[int, ...], int]:
    return {tuple(map(int, row)): i for i, row in enumerate(exponents(n_vars, degree))}


def monomial_index(n_vars: int, degree: int, exps: Sequence[int]) -> int:
    """Position of an exponent tuple in the canonical coefficient order."""
    return _exponent_index(n_vars, degree)[tuple(int(e) for e in exps)]


@lru_cache(maxsize=None)
def weyl_weights(n_vars: int, degree: int) -> np.ndarray:
    """Per-monomial weights j_0! ... j_n! / degree! in canonical order."""
    fact = [math.factorial(i) for i in range(degree + 1)]
    dfact = math.factorial(degree)
    rows = exponents(n_vars, degree).tolist()
    w = np.array([math.prod(fact[j] for j in row) / dfact for row in rows])
    w.setflags(write=False)
    return w


@lru_cache(maxsize=None)
def _sqrt_multinomials(n_vars: int, degree: int) -> np.ndarray:
    fact = [math.factorial(i) for i in range(degree + 1)]
    dfact = math.factorial(degree)
    rows = exponents(n_vars, degree).tolist()
    w = np.sqrt([dfact / math.prod(fact[j] for j in row) for row in rows])
    w.setflags(write=False)
    return w


@dataclass(frozen=True)
class HomogeneousPoly:
    """A homogeneous polynomial given by its dense canonical coefficient vector."""

    n_vars: int
    degree: int
    coeffs: np.ndarray

    def __post_init__(self) -> None:
        if self.n_vars < 1:
            raise ValueError("need at least one variable")
        if self.degree < 0:
            raise ValueError("degree must be nonnegative")
        c = np.ascontiguousarray(np.asarray(self.coeffs, dtype=np.complex128))
        m = monomial_count(self.n_vars, self.degree)
        if c.shape != (m,):
            raise ValueError(f"expected {m} coefficients for degree {self.degree} "
                             f"in {self.n_vars} variables, got shape {c.shape}")
        object.__setattr__(self, "coeffs", c)

    @classmethod
    def from_terms(cls, n_vars: int, degree: int,
                   terms: Mapping[tuple[int, ...], complex]) -> "HomogeneousPoly":
        """Build from a sparse {exponent tuple: coefficient} mapping."""
        idx = _exponent_index(n_vars, degree)
        c = np.zeros(monomial_count(n_vars, degree), dtype=np.complex128)
        for exp, val in terms.items():
            key = tuple(int(e) for e in exp)
            if len(key) != n_vars or any(e < 0 for e in key) or sum(key) != degree:
                raise ValueError(f"exponent {key} is not a degree-{degree} monomial "
                                 f"in {n_vars} variables")
            c[idx[key]] += val
        return cls(n_vars, degree, c)

    @property
    def is_zero(self) -> bool:
        return not np.any(self.coeffs)


@dataclass(frozen=True)
class PolySystem:
    """A square system: n homogeneous polynomials in n+1 variables."""

    polys: tuple[HomogeneousPoly, ...]

    def __post_init__(self) -> None:
        polys = tuple(self.polys)
        if not polys:
            raise ValueError("empty system")
        n_vars = polys[0].n_vars
        if any(p.n_vars != n_vars for p in polys):
            raise ValueError("all polynomials must share the same variables")
        if len(polys) != n_vars - 1:
            raise ValueError(f"square system needs {n_vars - 1} equations "
                             f"in {n_vars} variables, got {len(polys)}")
        for i, p in enumerate(polys):
            if p.degree < 1:
                raise ValueError(f"equation {i} has degree {p.degree} < 1")
            if p.is_zero:
                raise ValueError(f"equation {i} is identically zero")
        object.__setattr__(self, "polys", polys)

    @property
    def n_vars(self) -> int:
        return self.polys[0].n_vars

    @property
    def n(self) -> int:
        """Number of equations (= projective dimension of the ambient space)."""
        return len(self.polys)

    @property
    def degrees(self) -> tuple[int, ...]:
        return tuple(p.degree for p in self.polys)

    @property
    def max_degree(self) -> int:
        return max(self.degrees)

    @property
    def input_size(self) -> int:
        """Total number of complex coefficients describing the system."""
        return sum(monomial_count(p.n_vars, p.degree) for p in self.polys)


def evaluate(f: HomogeneousPoly, v: np.ndarray) -> complex:
    """Evaluate f at a complex vector of length f.n_vars."""
    v = np.asarray(v, dtype=np.complex128)
    if v.shape != (f.n_vars,):
        raise ValueError(f"point has shape {v.shape}, expected ({f.n_vars},)")
    mono = np.prod(v[None, :] ** exponents(f.n_vars, f.degree), axis=1)
    return complex(f.coeffs @ mono)


def gradient(f: HomogeneousPoly, v: np.ndarray) -> np.ndarray:
    """All partial derivatives of f at v, as a complex vector.

    Satisfies Euler's relation <grad, v> = degree * f(v) for homogeneous f.
    """
    v = np.asarray(v, dtype=np.complex128)
    if v.shape != (f.n_vars,):
        raise ValueError(f"point has shape {v.shape}, expected ({f.n_vars},)")
    E = exponents(f.n_vars, f.degree)
    out = np.empty(f.n_vars, dtype=np.complex128)
    for var in range(f.n_vars):
        Em = E.copy()
        Em[:, var] = np.maximum(E[:, var] - 1, 0)
        terms = np.prod(v[None, :] ** Em, axis=1)
        out[var] = np.sum(f.coeffs * E[:, var] * terms)
    return out


def weyl_norm(f: HomogeneousPoly) -> float:
    """Weighted coefficient norm (sum of j!/d! |c_j|^2)^(1/2).

    Terms are accumulated in sorted order, which makes the value exactly
    invariant under consistent permutations of the variables.
    """
    w = weyl_weights(f.n_vars, f.degree)
    terms = w * (f.coeffs.real**2 + f.coeffs.imag**2)
    return float(np.sqrt(np.sum(np.sort(terms))))


class _ShiftTables:
    """Single-variable binomial-convolution data on degree<=d dense vectors.

    The dense vector stacks all exponent tuples of total degree 0..d,
    degree-major, canonical order within each degree.  Shifting variable v by
    z_v is the sparse linear map with entries C(a_v, b_v) * z_v^(a_v - b_v)
    from source row a to target row b (rows agreeing outside v, b_v <= a_v).
    """

    def __init__(self, n_vars: int, degree: int) -> None:
        blocks = [exponents(n_vars, k) for k in range(degree + 1)]
        self.n_vars = n_vars
        self.degree = degree
        self.offsets = np.concatenate(([0], np.cumsum([len(b) for b in blocks])))
        self.exps_le = np.vstack(blocks)
        self.size = len(self.exps_le)
        self.degree_of = np.repeat(np.arange(degree + 1), [len(b) for b in blocks])
        row_index = {tuple(map(int, r)): i for i, r in enumerate(self.exps_le)}
        # Weyl weight of each row within its own degree block.
        fact = [math.factorial(i) for i in range(degree + 1)]
        self.weights_le = np.array(
            [math.prod(fact[j] for j in row) / math.factorial(int(sum(row)))
             for row in self.exps_le.tolist()])

        self.indptr = []
        self.indices = []
        self.binom = []
        self.powers = []
        for var in range(n_vars):
            rows, cols, binom, pows = [], [], [], []
            for j_src, exp in enumerate(self.exps_le.tolist()):
                e = exp[var]
                out = list(exp)
                for b in range(e + 1):
                    out[var] = b
                    rows.append(row_index[tuple(out)])
                    cols.append(j_src)
                    binom.append(math.comb(e, b))
                    pows.append(e - b)
            order = np.lexsort((np.array(cols), np.array(rows)))
            rows = np.array(rows)[order]
            cols = np.array(cols)[order]
            indptr = np.zeros(self.size + 1, dtype=np.int64)
            np.add.at(indptr, rows + 1, 1)
            indptr = np.cumsum(indptr)
            self.indptr.append(indptr)
            self.indices.append(cols.astype(np.int64))
            self.binom.append(np.array(binom, dtype=np.float64)[order])
            self.powers.append(np.array(pows, dtype=np.int64)[order])

    def shift(self, svec: np.ndarray, z: np.ndarray) -> np.ndarray:
        out = svec
        for var in range(self.n_vars):
            zp = z[var] ** np.arange(self.degree + 1)
            data = self.binom[var] * zp[self.powers[var]]
            mat = sparse.csr_matrix((data, self.indices[var], self.indptr[var]),
                                    shape=(self.size, self.size))
            out = mat @ out
        return out


@lru_cache(maxsize=None)
def _shift_tables(n_vars: int, degree: int) -> _ShiftTables:
    return _ShiftTables(n_vars, degree)


def taylor_shift(f: HomogeneousPoly, z: np.ndarray) -> tuple[HomogeneousPoly, ...]:
    """Homogeneous components g_0..g_d of f(z + x).

    One binomial-convolution shift per variable, applied in variable order.
    The components satisfy sum_k g_k(x) = f(z + x) identically.
    """
    z = np.asarray(z, dtype=np.complex128)
    if z.shape != (f.n_vars,):
        raise ValueError(f"shift vector has shape {z.shape}, expected ({f.n_vars},)")
    t = _shift_tables(f.n_vars, f.degree)
    svec = np.zeros(t.size, dtype=np.complex128)
    svec[t.offsets[f.degree]:] = f.coeffs
    svec = t.shift(svec, z)
    return tuple(
        HomogeneousPoly(f.n_vars, k, svec[t.offsets[k]:t.offsets[k + 1]].copy())
        for k in range(f.degree + 1))


def restrict_to_line(f: HomogeneousPoly, p: np.ndarray, q: np.ndarray) -> HomogeneousPoly:
    """Bivariate polynomial g(s, t) = f(s p + t q) for an orthonormal pair (p, q).

    Computed exactly by expanding each monomial of f with per-variable
    binomial convolutions, so coordinate frames reduce to coefficient
    extraction.
    """
    p = np.asarray(p, dtype=np.complex128)
    q = np.asarray(q, dtype=np.complex128)
    if p.shape != (f.n_vars,) or q.shape != (f.n_vars,):
        raise ValueError("frame vectors have wrong length")
    if (abs(np.linalg.norm(p) - 1.0) > FRAME_TOL or abs(np.linalg.norm(q) - 1.0) > FRAME_TOL
            or abs(np.vdot(p, q)) > FRAME_TOL):
        raise ValueError("line frame is not orthonormal")
    d = f.degree
    out = np.zeros(d + 1, dtype=np.complex128)
    E = exponents(f.n_vars, d).tolist()
    for c, exp in zip(f.coeffs, E):
        if c == 0:
            continue
        acc = np.array([c], dtype=np.complex128)
        for var, e in enumerate(exp):
            if e == 0:
                continue
            # (s p_var + t q_var)^e, coefficients indexed by the power of t
            m = np.arange(e + 1)
            factors = np.array([math.comb(e, int(mm)) for mm in m], dtype=np.float64)
            term = factors * p[var] ** (e - m) * q[var] ** m
            acc = np.convolve(acc, term)
        out[:len(acc)] += acc
    return HomogeneousPoly(2, d, out)


def kostlan_sample(n: int, d: int, rng: np.random.Generator) -> HomogeneousPoly:
    """Random polynomial with independent complex normal coefficients under
    the square-root multinomial scaling (each coefficient a + bi with a, b
    independent unit-variance normals).  Deterministic for a fixed generator
    state: real parts are drawn first, then imaginary parts.
    """
    if d < 1:
        raise ValueError("degree must be at least 1")
    n_vars = n + 1
    m = monomial_count(n_vars, d)
    re = rng.standard_normal(m)
    im = rng.standard_normal(m)
    return HomogeneousPoly(n_vars, d, _sqrt_multinomials(n_vars, d) * (re + 1j * im))


def kostlan_system(n: int, degrees: Sequence[int], rng: np.random.Generator) -> PolySystem:
    """A system of independent random polynomials of the given degrees."""
    if len(degrees) != n:
        raise ValueError(f"need {n} degrees, got {len(degrees)}")
    return PolySystem(tuple(kostlan_sample(n, int(d), rng) for d in degrees))
