import numpy as np
import pytest

from rigidsolve.conditioning import (gamma_frob, hat_gamma_frob, kappa,
                                     linearization, projective_distance)
from rigidsolve.hpoly import (HomogeneousPoly, PolySystem, kostlan_sample,
                              kostlan_system)
from rigidsolve.unitary import UnitaryTuple, haar_tuple, sample_unitary

from oracles import rotate_system

E0 = lambda k: np.eye(k, dtype=np.complex128)[0]


def coord_system(n):
    """Linear system (x_1, ..., x_n) in n+1 variables."""
    k = n + 1
    polys = []
    for i in range(1, k):
        exp = tuple(1 if j == i else 0 for j in range(k))
        polys.append(HomogeneousPoly.from_terms(k, 1, {exp: 1.0}))
    return PolySystem(tuple(polys))


def test_linearization_coordinate_system():
    F = coord_system(2)
    lin = linearization(F, UnitaryTuple.identity(2, 3), E0(3))
    assert np.allclose(lin.rows, np.eye(3)[1:], atol=1e-12)
    assert lin.well_defined


def test_linearization_equivariance_against_explicit_rotation(rng):
    F = kostlan_system(2, [2, 3], np.random.default_rng(0))
    u = haar_tuple(2, 3, np.random.default_rng(1))
    z = rng.standard_normal(3) + 1j * rng.standard_normal(3)
    z /= np.linalg.norm(z)
    lin = linearization(F, u, z)
    rotated = rotate_system(F, u)
    lin2 = linearization(rotated, UnitaryTuple.identity(2, 3), z)
    assert np.max(np.abs(lin.rows - lin2.rows)) <= 1e-9
    assert np.max(np.abs(lin.row_norms - lin2.row_norms)) <= 1e-9 * np.max(lin.row_norms)


def test_linearization_degenerate_row():
    f = HomogeneousPoly.from_terms(2, 2, {(2, 0): 1.0})  # gradient vanishes at e1
    F = PolySystem((f,))
    z = np.array([0.0, 1.0], dtype=np.complex128)
    lin = linearization(F, UnitaryTuple.identity(1, 2), z)
    assert lin.degenerate[0]
    assert kappa(F, UnitaryTuple.identity(1, 2), z) == np.inf


def test_kappa_reference_values():
    F = coord_system(2)
    ident = UnitaryTuple.identity(2, 3)
    assert kappa(F, ident, E0(3)) == pytest.approx(1.0, abs=1e-12)

    # rows (0,1,0) and (0,1/2,sqrt(3)/2): kappa = sqrt(2)
    f1 = HomogeneousPoly.from_terms(3, 1, {(0, 1, 0): 1.0})
    f2 = HomogeneousPoly.from_terms(3, 1, {(0, 1, 0): 0.5, (0, 0, 1): np.sqrt(3) / 2})
    F = PolySystem((f1, f2))
    assert kappa(F, ident, E0(3)) == pytest.approx(np.sqrt(2.0))

    # duplicated equations: rank deficiency
    F = PolySystem((f1, f1))
    assert kappa(F, ident, E0(3)) == np.inf


def test_kappa_one_iff_orthonormal():
    ident = UnitaryTuple.identity(2, 3)
    # orthonormal gradient rows: equality
    F = coord_system(2)
    assert abs(kappa(F, ident, E0(3)) - 1.0) <= 1e-8
    # non-orthogonal rows: strictly above 1
    f1 = HomogeneousPoly.from_terms(3, 1, {(0, 1, 0): 1.0})
    f2 = HomogeneousPoly.from_terms(3, 1, {(0, 1, 0): 0.5, (0, 0, 1): np.sqrt(3) / 2})
    F = PolySystem((f1, f2))
    assert kappa(F, ident, E0(3)) > 1.0 + 1e-8


def test_gamma_frob_reference_values():
    assert gamma_frob(HomogeneousPoly.from_terms(2, 1, {(1, 0): 1.0}), E0(2)) == 0.0
    assert gamma_frob(HomogeneousPoly.from_terms(2, 2, {(2, 0): 1.0}), E0(2)) \
        == pytest.approx(0.5)
    assert gamma_frob(HomogeneousPoly.from_terms(2, 3, {(3, 0): 1.0}), E0(2)) \
        == pytest.approx(1.0)


def test_gamma_frob_degenerate_gradient():
    f = HomogeneousPoly.from_terms(2, 2, {(2, 0): 1.0})
    assert gamma_frob(f, np.array([0.0, 1.0], dtype=np.complex128)) == np.inf


def test_gamma_frob_scaling_invariance():
    f = kostlan_sample(2, 3, np.random.default_rng(5))
    z = np.random.default_rng(6).standard_normal(3) + 0j
    z /= np.linalg.norm(z)
    base = gamma_frob(f, z)
    # power-of-two scalings commute exactly with float rounding
    for lam in (2.0, -0.5, 1024.0):
        g = HomogeneousPoly(f.n_vars, f.degree, lam * f.coeffs)
        assert gamma_frob(g, z) == base
    # generic complex scaling is invariant up to coefficient rounding
    g = HomogeneousPoly(f.n_vars, f.degree, (2.75 - 1.25j) * f.coeffs)
    assert gamma_frob(g, z) == pytest.approx(base, rel=1e-12)


def test_gamma_frob_unitary_invariance(rng):
    f = kostlan_sample(2, 3, np.random.default_rng(7))
    u = sample_unitary(3, np.random.default_rng(8))
    z = rng.standard_normal(3) + 1j * rng.standard_normal(3)
    z /= np.linalg.norm(z)
    from oracles import rotate_poly
    lhs = gamma_frob(rotate_poly(f, u), z)
    rhs = gamma_frob(f, u.conj().T @ z)
    assert abs(lhs - rhs) <= 1e-8 * max(rhs, 1.0)


def test_hat_gamma_frob_linear_orthonormal_is_zero():
    F = coord_system(2)
    rep = hat_gamma_frob(F, UnitaryTuple.identity(2, 3), E0(3))
    assert rep.hat_gamma_frob == 0.0
    assert rep.kappa == pytest.approx(1.0, abs=1e-12)
    assert np.all(rep.gamma_frob_per_eq == 0.0)


def test_hat_gamma_frob_single_square():
    F = PolySystem((HomogeneousPoly.from_terms(2, 2, {(2, 0): 1.0}),))
    rep = hat_gamma_frob(F, UnitaryTuple.identity(1, 2), E0(2))
    assert rep.kappa == pytest.approx(1.0, abs=1e-12)
    assert rep.hat_gamma_frob == pytest.approx(0.5)
    assert rep.g_value == rep.hat_gamma_frob


def test_hat_gamma_frob_infinity_propagates():
    f = HomogeneousPoly.from_terms(2, 2, {(2, 0): 1.0})
    F = PolySystem((f,))
    rep = hat_gamma_frob(F, UnitaryTuple.identity(1, 2), np.array([0.0, 1.0 + 0j]))
    assert rep.hat_gamma_frob == np.inf


def test_operator_norm_gamma_below_frobenius_gamma():
    # single equation: the Frobenius variant dominates the operator-norm one
    from oracles import gamma_operator_norm
    rng = np.random.default_rng(10)
    for trial in range(10):
        d = 2 + trial % 3
        f = kostlan_sample(1, d, rng)
        z = rng.standard_normal(2) + 1j * rng.standard_normal(2)
        z /= np.linalg.norm(z)
        oracle = gamma_operator_norm(PolySystem((f,)), z, rng, restarts=4, iters=25)
        assert oracle <= gamma_frob(f, z) + 1e-8


def test_gamma_lower_bound_at_zeros():
    # gamma >= (d-1)/2 everywhere, tested at refined zeros of random equations
    from rigidsolve.harness.experiments import uniform_zero_on_hypersurface
    rng = np.random.default_rng(9)
    for d in (2, 3, 4):
        for _ in range(10):
            f = kostlan_sample(2, d, rng)
            z = uniform_zero_on_hypersurface(f, rng)
            assert gamma_frob(f, z) >= (d - 1) / 2 - 1e-8


def test_gamma_frob_exact_at_antipodal_points(rng):
    # x and -x are the same projective point: zero distance, zero difference
    f = kostlan_sample(2, 4, np.random.default_rng(12))
    x = rng.standard_normal(3) + 1j * rng.standard_normal(3)
    x /= np.linalg.norm(x)
    assert projective_distance(x, -x) == 0.0
    assert gamma_frob(f, x) == gamma_frob(f, -x)


def test_projective_distance_properties(rng):
    x = rng.standard_normal(3) + 1j * rng.standard_normal(3)
    assert projective_distance(x, -x) == 0.0
    assert projective_distance(x, 1j * x) <= 1e-8
    y = rng.standard_normal(3) + 1j * rng.standard_normal(3)
    d = projective_distance(x, y)
    naive = np.arcsin(np.sqrt(max(0.0, 1.0 - (abs(np.vdot(x, y))
                      / (np.linalg.norm(x) * np.linalg.norm(y))) ** 2)))
    assert d == pytest.approx(naive, abs=1e-7)
    assert projective_distance(x, y) == pytest.approx(projective_distance(y, x), rel=1e-12)


def test_lipschitz_two_point_small_sample():
    from rigidsolve.harness.experiments import lipschitz
    rec = lipschitz(trials=300, seed=17, n=2, d=3)
    row = rec.rows[0]
    assert row[3] == 0 and row[4] == 0
