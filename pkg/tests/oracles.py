"""Independent verification routes used by the tests.

Everything here is deliberately naive: dict-based polynomial algebra, term
summation, finite differences, exhaustive enumeration, and power iteration.
None of it shares code with the library paths it checks.
"""

from __future__ import annotations

import math
from itertools import product

import numpy as np

from rigidsolve.hpoly import HomogeneousPoly, PolySystem, exponents

# ---------------------------------------------------------------------------
# dict-based polynomial algebra


def poly_to_dict(f: HomogeneousPoly) -> dict[tuple[int, ...], complex]:
    out = {}
    for row, c in zip(exponents(f.n_vars, f.degree).tolist(), f.coeffs):
        if c != 0:
            out[tuple(row)] = complex(c)
    return out


def dict_to_poly(n_vars: int, degree: int, d: dict) -> HomogeneousPoly:
    return HomogeneousPoly.from_terms(n_vars, degree, d)


def dict_mul(a: dict, b: dict) -> dict:
    out: dict[tuple[int, ...], complex] = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            key = tuple(x + y for x, y in zip(ea, eb))
            out[key] = out.get(key, 0.0) + ca * cb
    return out


def dict_pow(a: dict, k: int, n_vars: int) -> dict:
    out = {tuple([0] * n_vars): 1.0 + 0.0j}
    for _ in range(k):
        out = dict_mul(out, a)
    return out


def dict_diff(a: dict, var: int) -> dict:
    out: dict[tuple[int, ...], complex] = {}
    for e, c in a.items():
        if e[var] == 0:
            continue
        key = tuple(x - 1 if i == var else x for i, x in enumerate(e))
        out[key] = out.get(key, 0.0) + c * e[var]
    return out


def dict_eval(a: dict, v: np.ndarray) -> complex:
    total = 0.0 + 0.0j
    for e, c in a.items():
        term = c
        for x, p in zip(v, e):
            term *= x**p
        total += term
    return complex(total)


# ---------------------------------------------------------------------------
# elementary oracles


def eval_term_sum(f: HomogeneousPoly, v: np.ndarray) -> complex:
    """Naive per-monomial summation with scalar Python arithmetic."""
    total = 0.0 + 0.0j
    for row, c in zip(exponents(f.n_vars, f.degree).tolist(), f.coeffs):
        term = complex(c)
        for x, p in zip(v, row):
            term *= complex(x) ** p
        total += term
    return total


def fd_gradient(f: HomogeneousPoly, v: np.ndarray, h: float = 1e-6) -> np.ndarray:
    """Central finite differences of the holomorphic evaluation map."""
    out = np.empty(f.n_vars, dtype=np.complex128)
    for j in range(f.n_vars):
        e = np.zeros(f.n_vars, dtype=np.complex128)
        e[j] = h
        out[j] = (eval_term_sum(f, v + e) - eval_term_sum(f, v - e)) / (2 * h)
    return out


def rotate_poly(f: HomogeneousPoly, u: np.ndarray) -> HomogeneousPoly:
    """Materialize f o u^-1 (that is x -> f(u* x)) coefficientwise."""
    n_vars = f.n_vars
    ustar = np.asarray(u).conj().T
    forms = []
    for j in range(n_vars):
        form = {}
        for l in range(n_vars):
            if ustar[j, l] != 0:
                key = tuple(1 if i == l else 0 for i in range(n_vars))
                form[key] = complex(ustar[j, l])
        forms.append(form)
    acc: dict[tuple[int, ...], complex] = {}
    for row, c in zip(exponents(n_vars, f.degree).tolist(), f.coeffs):
        if c == 0:
            continue
        term = {tuple([0] * n_vars): complex(c)}
        for var, e in enumerate(row):
            if e:
                term = dict_mul(term, dict_pow(forms[var], e, n_vars))
        for key, val in term.items():
            acc[key] = acc.get(key, 0.0) + val
    return dict_to_poly(n_vars, f.degree, acc)


def rotate_system(F: PolySystem, u) -> PolySystem:
    """Apply u_i to equation i, coefficientwise."""
    return PolySystem(tuple(rotate_poly(F.polys[i], u[i]) for i in range(F.n)))


# ---------------------------------------------------------------------------
# derivative tensors


def derivative_tensor_entry_cache(f: HomogeneousPoly, z: np.ndarray, order: int):
    """Map from differentiation multisets (as sorted tuples of variable
    indices) to the exact value of the corresponding partial at z."""
    base = poly_to_dict(f)
    cache: dict[tuple[int, ...], complex] = {}

    def entry(idx: tuple[int, ...]) -> complex:
        key = tuple(sorted(idx))
        if key not in cache:
            d = base
            for var in key:
                d = dict_diff(d, var)
            cache[key] = dict_eval(d, z)
        return cache[key]

    return entry


def tensor_frobenius_norm(f: HomogeneousPoly, z: np.ndarray, order: int) -> float:
    """|| (1/k!) d_z^k f ||_Frob by full enumeration of all index tuples."""
    entry = derivative_tensor_entry_cache(f, z, order)
    total = 0.0
    for idx in product(range(f.n_vars), repeat=order):
        total += abs(entry(idx)) ** 2
    return math.sqrt(total) / math.factorial(order)


# ---------------------------------------------------------------------------
# operator-norm gamma lower bound (power iteration on the diagonal)


def gamma_operator_norm(G: PolySystem, z: np.ndarray, rng: np.random.Generator,
                        restarts: int = 8, iters: int = 40) -> float:
    """Lower estimate of the operator-norm gamma of the plain system G at z.

    For each derivative order, maximizes ||J^+ (g_k^(1)(x), ..., g_k^(n)(x))||
    over unit x by alternating power iteration with random restarts, where
    g_k^(i) is the degree-k component of f_i(z + .) and J^+ the pseudo-inverse
    of the Jacobian.  Underestimates are safe for the inequality under test.
    """
    from rigidsolve.hpoly import evaluate, gradient, taylor_shift

    k_dim = G.n_vars
    J = np.stack([gradient(p, z) for p in G.polys])
    Jdag = np.linalg.pinv(J)
    shifts = [taylor_shift(p, z) for p in G.polys]

    best_gamma = 0.0
    for order in range(2, G.max_degree + 1):
        comps = [s[order] if order <= p.degree else None
                 for s, p in zip(shifts, G.polys)]

        def value_and_direction(x):
            vals = np.array([0j if c is None else evaluate(c, x) for c in comps])
            q = Jdag @ vals
            return float(np.linalg.norm(q)), q

        best = 0.0
        for _ in range(restarts):
            x = rng.standard_normal(k_dim) + 1j * rng.standard_normal(k_dim)
            x /= np.linalg.norm(x)
            for _ in range(iters):
                val, q = value_and_direction(x)
                if val <= 1e-300:
                    break
                y = q / np.linalg.norm(q)
                jac = np.stack([np.zeros(k_dim, complex) if c is None else gradient(c, x)
                                for c in comps])
                ell = (y.conj() @ Jdag) @ jac
                nrm = np.linalg.norm(ell)
                if nrm <= 1e-300:
                    break
                x = ell.conj() / nrm
            val, _ = value_and_direction(x)
            best = max(best, val)
        if best > 0:
            best_gamma = max(best_gamma, best ** (1.0 / (order - 1)))
    return best_gamma


# ---------------------------------------------------------------------------
# systems with known zeros


def random_linear_form(n_vars: int, rng: np.random.Generator) -> np.ndarray:
    return rng.standard_normal(n_vars) + 1j * rng.standard_normal(n_vars)


def product_of_linear_forms_system(n: int, degrees: list[int], rng: np.random.Generator):
    """System whose i-th equation is a product of d_i random linear forms;
    returns (system, per-equation list of form covectors)."""
    n_vars = n + 1
    all_forms = []
    polys = []
    for d in degrees:
        forms = [random_linear_form(n_vars, rng) for _ in range(d)]
        all_forms.append(forms)
        acc = {tuple([0] * n_vars): 1.0 + 0.0j}
        for lam in forms:
            lin = {tuple(1 if i == l else 0 for i in range(n_vars)): complex(lam[l])
                   for l in range(n_vars) if lam[l] != 0}
            acc = dict_mul(acc, lin)
        polys.append(dict_to_poly(n_vars, d, acc))
    return PolySystem(tuple(polys)), all_forms


def linear_intersection_zeros(all_forms: list[list[np.ndarray]]) -> list[np.ndarray]:
    """All common zeros of one form per equation, by kernel computation."""
    n = len(all_forms)
    zeros = []
    for combo in product(*all_forms):
        m = np.stack(combo)
        _, s, vh = np.linalg.svd(m)
        if s[-1] > 1e-8 * s[0]:
            zeros.append(vh[-1].conj())
    return zeros
