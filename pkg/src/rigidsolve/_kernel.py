"""Compiled inner loop for geodesic-path continuation.

Runs the same algorithm as the pure-python tracker in `rigid`, restricted to
uniform-degree systems on geodesic paths (the default configuration, and the
one exercised by the large Monte Carlo runs).  One Taylor shift per equation
yields the value, the gradient, and all the weighted derivative norms at
once, so a continuation step costs two shift passes per equation plus two
small decompositions.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from .hpoly import PolySystem, _shift_tables

try:
    import numba

    AVAILABLE = True
except ImportError:  # pragma: no cover
    AVAILABLE = False

OUTCOMES = {0: "success", 1: "step_underflow", 2: "max_steps_exceeded", 3: "newton_failure"}

BORDERED_COND_LIMIT = 1e14


@lru_cache(maxsize=None)
def _pack_tables(n_vars: int, degree: int):
    t = _shift_tables(n_vars, degree)
    indptr = np.stack(t.indptr).astype(np.int64)
    var_ptr = np.concatenate(([0], np.cumsum([len(x) for x in t.indices]))).astype(np.int64)
    indices = np.concatenate(t.indices).astype(np.int64)
    binom = np.concatenate(t.binom).astype(np.float64)
    pows = np.concatenate(t.powers).astype(np.int64)
    offsets = np.asarray(t.offsets, dtype=np.int64)
    wdeg = np.ascontiguousarray(t.weights_le, dtype=np.float64)
    degof = np.ascontiguousarray(t.degree_of, dtype=np.int64)
    return indptr, var_ptr, indices, binom, pows, offsets, wdeg, degof


if AVAILABLE:

    @numba.njit(cache=True, nogil=True)
    def _track(vq, qh, phases, T, coeffs,
               indptr, var_ptr, indices, binom, pows, offsets, wdeg, degof,
               z_in, denom, max_steps, gfloor_active, gamma_floor, underflow_rel):
        n = coeffs.shape[0]
        k = z_in.shape[0]
        d = offsets.shape[0] - 2
        S = offsets[d + 1]
        off_d = offsets[d]
        M = coeffs.shape[1]

        z = z_in.copy()
        w = np.empty((n, k, k), np.complex128)
        svec = np.empty(S, np.complex128)
        tmp = np.empty(S, np.complex128)
        ypow = np.empty(d + 1, np.complex128)
        y = np.empty(k, np.complex128)
        L = np.empty((n, k), np.complex128)
        grads = np.empty((n, k), np.complex128)
        vals = np.empty(n, np.complex128)
        B = np.empty((k, k), np.complex128)
        rhs = np.empty(k, np.complex128)
        norms2 = np.empty(d + 1, np.float64)

        def shifted(i):
            # y = w_i^* z
            for a in range(k):
                acc = 0.0 + 0.0j
                for b in range(k):
                    acc += np.conj(w[i, b, a]) * z[b]
                y[a] = acc
            for r in range(S):
                svec[r] = 0.0 + 0.0j
            for m in range(M):
                svec[off_d + m] = coeffs[i, m]
            src = svec
            dst = tmp
            for v in range(k):
                ypow[0] = 1.0 + 0.0j
                for p in range(1, d + 1):
                    ypow[p] = ypow[p - 1] * y[v]
                base = var_ptr[v]
                for r in range(S):
                    acc = 0.0 + 0.0j
                    for ii in range(indptr[v, r], indptr[v, r + 1]):
                        acc += binom[base + ii] * ypow[pows[base + ii]] * src[indices[base + ii]]
                    dst[r] = acc
                swap = src
                src = dst
                dst = swap
            return src

        rot = np.empty(k, np.complex128)

        def eval_path(t_par):
            s = t_par / T
            for i in range(n):
                # w_i = vq_i @ diag(exp(1j s phases_i)) @ qh_i
                for c in range(k):
                    rot[c] = np.exp(1j * s * phases[i, c])
                for a in range(k):
                    for b in range(k):
                        acc = 0.0 + 0.0j
                        for c in range(k):
                            acc += vq[i, a, c] * rot[c] * qh[i, c, b]
                        w[i, a, b] = acc

        def condition():
            # returns kappa * g (with the all-linear floor); inf -> 0.0 step later
            sumg2 = 0.0
            for i in range(n):
                src = shifted(i)
                for q in range(d + 1):
                    norms2[q] = 0.0
                for r in range(S):
                    cr = src[r]
                    norms2[degof[r]] += wdeg[r] * (cr.real * cr.real + cr.imag * cr.imag)
                gn2 = norms2[1]
                if gn2 < 1e-250:
                    return np.inf
                gi = 0.0
                gn = np.sqrt(gn2)
                for q in range(2, d + 1):
                    ratio = np.sqrt(norms2[q]) / gn
                    val = ratio ** (1.0 / (q - 1))
                    if val > gi:
                        gi = val
                sumg2 += gi * gi
                # unit row of the linearization: conj(w_i) @ grad / |...|
                rn2 = 0.0
                for a in range(k):
                    acc = 0.0 + 0.0j
                    for b in range(k):
                        acc += np.conj(w[i, a, b]) * src[1 + b]
                    L[i, a] = acc
                    rn2 += acc.real * acc.real + acc.imag * acc.imag
                rn = np.sqrt(rn2)
                for a in range(k):
                    L[i, a] = L[i, a] / rn
            sv = np.linalg.svd(L, full_matrices=False)[1]
            smin = sv[n - 1]
            if smin < 1e-150:
                return np.inf
            kap = 1.0 / smin
            if kap < 1.0:
                kap = 1.0
            g = kap * np.sqrt(sumg2)
            if gfloor_active and g < gamma_floor:
                g = gamma_floor
            return kap * g

        K = 0
        eval_path(0.0)
        kg = condition()
        if not np.isfinite(kg) or kg <= 0.0:
            return z, 0, 1
        t = 1.0 / (denom * kg)
        if t < underflow_rel * T:
            return z, 0, 1
        outcome = 0
        while True:
            t_eval = t if t < T else T
            eval_path(t_eval)
            # Newton update of z against the rotated system at w
            for i in range(n):
                src = shifted(i)
                vals[i] = src[0]
                for a in range(k):
                    grads[i, a] = src[1 + a]
            for i in range(n):
                for a in range(k):
                    acc = 0.0 + 0.0j
                    for b in range(k):
                        acc += np.conj(w[i, a, b]) * grads[i, b]
                    B[i, a] = acc
            for a in range(k):
                B[n, a] = np.conj(z[a])
                rhs[a] = 0.0 + 0.0j
            for i in range(n):
                rhs[i] = vals[i]
            ub, sb, vhb = np.linalg.svd(B)
            if sb[k - 1] <= 0.0 or sb[0] / sb[k - 1] > BORDERED_COND_LIMIT:
                outcome = 3
                break
            proj = np.conj(ub.T) @ rhs
            for a in range(k):
                proj[a] = proj[a] / sb[a]
            delta = np.conj(vhb.T) @ proj
            zn2 = 0.0
            for a in range(k):
                z[a] = z[a] - delta[a]
                zn2 += z[a].real * z[a].real + z[a].imag * z[a].imag
            zn = np.sqrt(zn2)
            for a in range(k):
                z[a] = z[a] / zn
            K += 1
            if t >= T:
                break
            kg = condition()
            if not np.isfinite(kg) or kg <= 0.0:
                outcome = 1
                break
            step = 1.0 / (denom * kg)
            if step < underflow_rel * T:
                outcome = 1
                break
            t += step
            if K >= max_steps and t < T:
                outcome = 2
                break
        return z, K, outcome


def track_geodesic(F: PolySystem, path, z0: np.ndarray, settings,
                   gamma_floor: float, underflow_rel: float):
    """Run the compiled tracker; returns (z, steps, outcome code)."""
    d = F.degrees[0]
    pack = _pack_tables(F.n_vars, d)
    coeffs = np.stack([p.coeffs for p in F.polys])
    denom = settings.step_denominator * max(settings.relaxation_M, path.relaxation)
    z, steps, code = _track(path.gd_vq, path.gd_qh, path.gd_phases, path.length,
                            coeffs, *pack, np.ascontiguousarray(z0, dtype=np.complex128),
                            denom, settings.max_steps, F.max_degree == 1,
                            gamma_floor, underflow_rel)
    return z, int(steps), int(code)


def ensure_compiled() -> None:
    """Trigger jit compilation once (useful before fanning out to threads)."""
    if not AVAILABLE:
        return
    from .hpoly import HomogeneousPoly
    from .rigid import TrackerSettings  # local import to avoid a cycle at module load
    from .unitary import UnitaryTuple, build_path

    f = HomogeneousPoly.from_terms(2, 2, {(2, 0): 1.0, (0, 2): -1.0})
    F = PolySystem((f,))
    ident = UnitaryTuple.identity(1, 2)
    theta = np.diag(np.exp(1j * np.array([0.3, -0.1]))).astype(np.complex128)
    path = build_path(ident, UnitaryTuple(theta[None, :, :]), "geodesic")
    z0 = np.array([1.0, 1.0], dtype=np.complex128) / np.sqrt(2.0)
    track_geodesic(F, path, z0, TrackerSettings(), 1e-3, 1e-16)
