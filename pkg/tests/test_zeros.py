import numpy as np
import pytest

from rigidsolve.conditioning import projective_distance
from rigidsolve.hpoly import (HomogeneousPoly, PolySystem, evaluate,
                              kostlan_sample, kostlan_system, weyl_norm)
from rigidsolve.unitary import UnitaryTuple, sample_unitary
from rigidsolve.zeros import (NewtonFailureError,
                              ProjectivePoint, bivariate_roots,
                              certify_by_contraction, has_near_multiple_root,
                              newton_step, rotated_residuals)

from oracles import (linear_intersection_zeros, product_of_linear_forms_system,
                     rotate_system)


def test_projective_point_normalizes():
    p = ProjectivePoint(np.array([3.0, 4.0j]))
    assert np.linalg.norm(p.rep) == pytest.approx(1.0, abs=1e-12)
    with pytest.raises(ValueError):
        ProjectivePoint(np.zeros(2))


def test_newton_exact_on_linear_systems():
    rng = np.random.default_rng(0)
    F, _ = product_of_linear_forms_system(2, [1, 1], rng)
    ident = UnitaryTuple.identity(2, 3)
    z = ProjectivePoint(rng.standard_normal(3) + 1j * rng.standard_normal(3))
    z1 = newton_step(F, ident, z)
    assert rotated_residuals(F, ident, z1).max() <= 1e-10


def test_newton_fixed_point_at_zero():
    rng = np.random.default_rng(1)
    F, forms = product_of_linear_forms_system(2, [1, 2], rng)
    zero = ProjectivePoint(linear_intersection_zeros([forms[0], [forms[1][0]]])[0])
    ident = UnitaryTuple.identity(2, 3)
    z1 = newton_step(F, ident, zero)
    assert zero.distance_to(z1) <= 1e-10


def test_newton_update_is_orthogonal_to_representative():
    rng = np.random.default_rng(2)
    F = kostlan_system(2, [2, 2], rng)
    ident = UnitaryTuple.identity(2, 3)
    z = ProjectivePoint(rng.standard_normal(3) + 1j * rng.standard_normal(3))
    z1 = newton_step(F, ident, z)
    # recover the raw update: z1.rep is proportional to z.rep - delta, delta in z-perp
    # check <z1_unnormalized - z, z> = 0 via the projection of z1 onto z
    lam = np.vdot(z.rep, z1.rep)  # scaling factor of the z-component
    delta = z.rep - z1.rep / lam
    assert abs(np.vdot(z.rep, delta)) <= 1e-10 * np.linalg.norm(delta / lam)


def test_newton_equivariance():
    rng = np.random.default_rng(3)
    F = kostlan_system(2, [2, 3], rng)
    w = sample_unitary(3, rng)
    ident = UnitaryTuple.identity(2, 3)
    z = ProjectivePoint(rng.standard_normal(3) + 1j * rng.standard_normal(3))
    plain = newton_step(F, ident, z)
    rotated = rotate_system(F, UnitaryTuple(np.stack([w, w])))
    moved = newton_step(rotated, ident, ProjectivePoint(w @ z.rep))
    assert projective_distance(moved.rep, w @ plain.rep) <= 1e-9


def test_newton_failure_signal():
    f = HomogeneousPoly.from_terms(2, 2, {(2, 0): 1.0})
    F = PolySystem((f,))
    ident = UnitaryTuple.identity(1, 2)
    with pytest.raises(NewtonFailureError):
        newton_step(F, ident, ProjectivePoint(np.array([0.0, 1.0 + 0j])))


def test_bivariate_roots_reference_cases():
    g = HomogeneousPoly.from_terms(2, 2, {(2, 0): 1.0, (0, 2): -1.0})
    roots = bivariate_roots(g)
    assert len(roots) == 2
    targets = [np.array([1.0, 1.0]) / np.sqrt(2), np.array([1.0, -1.0]) / np.sqrt(2)]
    for t in targets:
        assert min(projective_distance(r.rep, t) for r in roots) <= 1e-12

    st = HomogeneousPoly.from_terms(2, 2, {(1, 1): 1.0})
    roots = bivariate_roots(st)
    assert min(projective_distance(r.rep, np.array([1.0, 0.0])) for r in roots) <= 1e-12
    assert min(projective_distance(r.rep, np.array([0.0, 1.0])) for r in roots) <= 1e-12


def test_bivariate_roots_random_residuals():
    rng = np.random.default_rng(4)
    for d in range(1, 7):
        g = kostlan_sample(1, d, rng)
        roots = bivariate_roots(g)
        assert len(roots) == d
        for r in roots:
            assert abs(evaluate(g, r.rep)) / weyl_norm(g) <= 1e-10


def test_bivariate_roots_reconstruction():
    rng = np.random.default_rng(5)
    for d in (2, 4, 6):
        g = kostlan_sample(1, d, rng)
        roots = bivariate_roots(g)
        # product of (t s_j - s t_j) matches g up to one scalar
        prod = np.array([1.0 + 0j])
        for r in roots:
            s_j, t_j = r.rep
            prod = np.convolve(prod, np.array([-t_j, s_j]))  # coeffs in t-degree order
        scale = g.coeffs[np.argmax(np.abs(g.coeffs))] / prod[np.argmax(np.abs(g.coeffs))]
        assert np.max(np.abs(scale * prod - g.coeffs)) <= 1e-8 * np.max(np.abs(g.coeffs))


def test_bivariate_roots_rejects_zero():
    with pytest.raises(ValueError):
        bivariate_roots(HomogeneousPoly(2, 3, np.zeros(4)))


def test_near_multiple_detection():
    g = HomogeneousPoly.from_terms(2, 2, {(2, 0): 1.0, (1, 1): -2.0, (0, 2): 1.0})
    roots = bivariate_roots(g)  # (s - t)^2
    assert has_near_multiple_root(roots)
    h = HomogeneousPoly.from_terms(2, 2, {(2, 0): 1.0, (0, 2): -1.0})
    assert not has_near_multiple_root(bivariate_roots(h))


def test_certify_exact_zero_of_linear_system():
    rng = np.random.default_rng(6)
    F, forms = product_of_linear_forms_system(2, [1, 1], rng)
    zero = ProjectivePoint(linear_intersection_zeros(forms)[0])
    cert = certify_by_contraction(F, UnitaryTuple.identity(2, 3), zero)
    assert cert.certified
    assert np.all(cert.contraction_ratios == 0.0)
    assert cert.final_residuals.max() <= 1e-12


def test_certify_from_moderate_distance():
    # start 0.3 away from the zero [1:1] of x0^2 - x1^2
    f = HomogeneousPoly.from_terms(2, 2, {(2, 0): 1.0, (0, 2): -1.0})
    F = PolySystem((f,))
    t = 0.5274915061704696  # dP([1:t],[1:1]) = 0.3
    z = ProjectivePoint(np.array([1.0, t]))
    assert projective_distance(z.rep, np.array([1.0, 1.0])) == pytest.approx(0.3, abs=1e-6)
    cert = certify_by_contraction(F, UnitaryTuple.identity(1, 2), z)
    assert cert.certified
    assert projective_distance(cert.refined.rep, np.array([1.0, 1.0])) <= 1e-8


def test_certify_rejects_far_points():
    rng = np.random.default_rng(7)
    rejected = 0
    trials = 100
    for _ in range(trials):
        F = kostlan_system(2, [2, 2], rng)
        z = ProjectivePoint(rng.standard_normal(3) + 1j * rng.standard_normal(3))
        cert = certify_by_contraction(F, UnitaryTuple.identity(2, 3), z)
        rejected += not cert.certified
    assert rejected >= trials - 2


def test_certified_iterates_contract_monotonically():
    rng = np.random.default_rng(8)
    F = kostlan_system(2, [2, 2], rng)
    ident = UnitaryTuple.identity(2, 3)
    from rigidsolve.rigid import solve
    z, stats = solve(F, ident, rng)
    cert = certify_by_contraction(F, ident, z)
    assert cert.certified
    # one more step from the refined point must not move away from the limit
    limit = cert.refined
    extra = newton_step(F, ident, limit)
    assert extra.distance_to(limit) <= 1e-10
