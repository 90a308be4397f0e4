from __future__ import annotations

import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import gibbsfactor as gf

METRIC_SLACK = 1e-12


def simplex_points(rng, size, count):
    pts = rng.uniform(0.01, 1.0, size=(count, size))
    pts /= pts.sum(axis=1, keepdims=True)
    return pts


def test_distance_zero_iff_proportional():
    x = gf.SimplexPoint(np.array([0.2, 0.3, 0.5]))
    y = gf.SimplexPoint(np.array([0.4, 0.6, 1.0]) / 2.0)
    assert gf.projective_distance(x, y) < 1e-15
    z = gf.SimplexPoint(np.array([0.5, 0.3, 0.2]))
    assert gf.projective_distance(x, z) > 0.1


def test_distance_known_value():
    x = gf.SimplexPoint(np.array([0.5, 0.5]))
    y = gf.SimplexPoint(np.array([0.25, 0.75]))
    # max ratio 2, min ratio 2/3
    assert gf.projective_distance(x, y) == pytest.approx(math.log(3.0), abs=1e-14)


def test_metric_axioms_random_triples():
    rng = np.random.default_rng(7)
    pts = simplex_points(rng, 4, 3 * 10**4).reshape(10**4, 3, 4)
    for x, y, z in pts:
        sx = gf.SimplexPoint(x)
        sy = gf.SimplexPoint(y)
        sz = gf.SimplexPoint(z)
        dxy = gf.projective_distance(sx, sy)
        dyx = gf.projective_distance(sy, sx)
        dxz = gf.projective_distance(sx, sz)
        dzy = gf.projective_distance(sz, sy)
        assert dxy >= 0.0
        assert abs(dxy - dyx) < METRIC_SLACK
        assert dxy <= dxz + dzy + METRIC_SLACK


def test_row_allowable_detection():
    ok, row = gf.is_row_allowable(np.array([[0.0, 1.0], [2.0, 0.0]]))
    assert ok and row is None
    ok, row = gf.is_row_allowable(np.array([[0.0, 1.0], [0.0, 0.0]]))
    assert not ok and row == 1


def test_apply_normalized_matches_hand_computation():
    mat = np.array([[2.0, 1.0], [1.0, 1.0]])
    x = gf.SimplexPoint(np.array([0.5, 0.5]))
    y = gf.apply_normalized(mat, x)
    raw = mat @ np.array([0.5, 0.5])
    assert np.abs(y.coords - raw / raw.sum()).max() < 1e-15


def test_apply_normalized_refuses_zero_row():
    mat = np.array([[0.0, 0.0], [1.0, 2.0]])
    x = gf.SimplexPoint(np.array([0.5, 0.5]))
    with pytest.raises(gf.ModelError):
        gf.apply_normalized(mat, x)


def test_simplex_point_rejects_boundary():
    with pytest.raises(gf.ModelError):
        gf.SimplexPoint(np.array([1.0, 0.0]))


def test_distance_refuses_fiber_mismatch():
    x = gf.SimplexPoint(np.array([0.5, 0.5]), fiber=0)
    y = gf.SimplexPoint(np.array([0.5, 0.5]), fiber=1)
    with pytest.raises(gf.FiberMismatchError):
        gf.projective_distance(x, y)


def test_nonexpansive_row_allowable():
    rng = np.random.default_rng(11)
    for _ in range(10**4):
        size = rng.integers(2, 5)
        mat = rng.uniform(0.0, 1.0, size=(size, size))
        mat[mat < 0.35] = 0.0
        # patch zero rows so the matrix is row allowable
        for i in range(size):
            if not mat[i].any():
                mat[i, rng.integers(size)] = rng.uniform(0.1, 1.0)
        x = gf.SimplexPoint(rng.uniform(0.01, 1.0, size))
        y = gf.SimplexPoint(rng.uniform(0.01, 1.0, size))
        before = gf.projective_distance(x, y)
        after = gf.projective_distance(
            gf.apply_normalized(mat, x), gf.apply_normalized(mat, y)
        )
        assert after <= before + METRIC_SLACK


def brute_force_tau(mat):
    size = mat.shape[0]
    phi = math.inf
    for i, j, k, ell in itertools.product(range(size), repeat=4):
        phi = min(phi, (mat[i, j] * mat[k, ell]) / (mat[k, j] * mat[i, ell]))
    return (1.0 - math.sqrt(phi)) / (1.0 + math.sqrt(phi))


def test_contraction_coefficient_known_matrix():
    mat = np.array([[2.0, 1.0], [1.0, 1.0]])
    coeff = gf.contraction_coefficient(mat)
    root = math.sqrt(0.5)
    assert coeff.tau == pytest.approx((1 - root) / (1 + root), abs=1e-12)
    assert coeff.tau == pytest.approx(brute_force_tau(mat), abs=1e-12)


def test_contraction_coefficient_one_with_zero_entry():
    mat = np.array([[1.0, 0.0], [1.0, 1.0]])
    assert gf.contraction_coefficient(mat).tau == 1.0


def _segment_ratio(mat, j, ell, u, du, eps=1e-12):
    """Contraction ratio of a nearby pair on the (e_j, e_ell) segment.

    The pair sits at log-coordinate u along the segment (pushed eps into the
    interior so coordinates stay strictly positive) and is separated by 2 du.
    """
    size = mat.shape[0]

    def point(uu):
        s = math.exp(uu)
        base = np.full(size, eps / size)
        base[j] += s / (1.0 + s)
        base[ell] += 1.0 / (1.0 + s)
        return gf.SimplexPoint(base)

    x = point(u + du)
    y = point(u - du)
    d0 = gf.projective_distance(x, y)
    d1 = gf.projective_distance(
        gf.apply_normalized(mat, x), gf.apply_normalized(mat, y)
    )
    return d1 / d0


def test_empirical_contraction_matches_tau():
    # the coefficient is a supremum over point pairs; it is approached by
    # infinitesimally separated pairs on the segment between the two columns
    # of the minimizing cross-ratio quadruple, at an interior position set by
    # that quadruple's entries
    rng = np.random.default_rng(23)
    for _ in range(100):
        size = int(rng.integers(2, 5))
        mat = rng.uniform(0.1, 2.0, size=(size, size))
        tau = gf.contraction_coefficient(mat).tau

        best = 0.0
        # random pairs never exceed tau
        for _ in range(100):
            x = gf.SimplexPoint(rng.uniform(0.01, 1.0, size))
            y = gf.SimplexPoint(rng.uniform(0.01, 1.0, size))
            d0 = gf.projective_distance(x, y)
            if d0 < 1e-9:
                continue
            d1 = gf.projective_distance(
                gf.apply_normalized(mat, x), gf.apply_normalized(mat, y)
            )
            ratio = d1 / d0
            assert ratio <= tau + 1e-9
            best = max(best, ratio)

        # minimizing quadruple: rows (i, k), columns (j, ell)
        phi_best, quad = math.inf, None
        for i, k, j, ell in itertools.product(range(size), repeat=4):
            if j == ell or i == k:
                continue
            val = (mat[i, j] * mat[k, ell]) / (mat[k, j] * mat[i, ell])
            if val < phi_best:
                phi_best, quad = val, (i, k, j, ell)
        i, k, j, ell = quad
        # restricted to the segment, the extremal pair position solves a
        # two-by-two problem with entries (a, b; c, d)
        a, b = mat[i, j], mat[i, ell]
        c, d = mat[k, j], mat[k, ell]
        u_star = 0.5 * math.log(b * d / (a * c))
        for u in (u_star, u_star - 0.05, u_star + 0.05):
            ratio = _segment_ratio(mat, j, ell, u, du=1e-5)
            assert ratio <= tau + 1e-9
            best = max(best, ratio)
        assert best >= 0.95 * tau


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(2, 5))
def test_contraction_bound_holds_for_positive_matrices(seed, size):
    rng = np.random.default_rng(seed)
    mat = rng.uniform(0.05, 3.0, size=(size, size))
    tau = gf.contraction_coefficient(mat).tau
    assert 0.0 <= tau < 1.0
    x = gf.SimplexPoint(rng.uniform(0.01, 1.0, size))
    y = gf.SimplexPoint(rng.uniform(0.01, 1.0, size))
    d0 = gf.projective_distance(x, y)
    if d0 > 1e-9:
        d1 = gf.projective_distance(
            gf.apply_normalized(mat, x), gf.apply_normalized(mat, y)
        )
        assert d1 <= tau * d0 + 1e-12
