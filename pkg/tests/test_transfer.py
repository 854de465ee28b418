import numpy as np
import pytest

from proxmg.grid import GridLevel, ij_to_k
from proxmg.membrane import obstacle_values
from proxmg.nonsmooth import SeparableNonsmooth
from proxmg.transfer import (adaptive_mask, build_full_weighting,
                             build_line_weighting, prolong_adaptive,
                             restrict_adaptive)


def dense_weighting_oracle(n_fine):
    """Direct stencil-loop construction, independent of the kron build."""
    n_c = (n_fine - 1) // 2
    R = np.zeros((n_c * n_c, n_fine * n_fine))
    stencil = np.array([[1.0, 2.0, 1.0], [2.0, 4.0, 2.0], [1.0, 2.0, 1.0]]) / 8.0
    for I in range(1, n_c + 1):
        for J in range(1, n_c + 1):
            row = ij_to_k(I, J, n_c)
            for di in (-1, 0, 1):
                for dj in (-1, 0, 1):
                    fi, fj = 2 * I + di, 2 * J + dj
                    R[row, ij_to_k(fi, fj, n_fine)] = stencil[di + 1, dj + 1]
    return R


def test_full_weighting_matches_stencil_oracle():
    t = build_full_weighting(GridLevel(0, 7))
    assert t.restrict.shape == (9, 49)
    np.testing.assert_allclose(t.restrict.toarray(), dense_weighting_oracle(7), atol=0)
    np.testing.assert_allclose(t.prolong.toarray(), 2.0 * t.restrict.toarray().T, atol=0)


def test_restriction_of_ones_and_row_sums():
    t = build_full_weighting(GridLevel(0, 15))
    ones = np.ones(t.n_fine)
    np.testing.assert_allclose(t.restrict @ ones, 2.0 * np.ones(t.n_coarse), rtol=1e-15)
    sums = np.asarray(t.restrict.sum(axis=1)).ravel()
    np.testing.assert_allclose(sums, 2.0, rtol=1e-15)


def test_restriction_of_delta_reads_the_stencil():
    t = build_full_weighting(GridLevel(0, 7))
    # a delta at the coarse-aligned fine point (2,2) only feeds its own center
    delta = np.zeros(49)
    delta[ij_to_k(2, 2, 7)] = 1.0
    out = t.restrict @ delta
    expect = np.zeros(9)
    expect[ij_to_k(1, 1, 3)] = 0.5  # center weight 4/8
    np.testing.assert_allclose(out, expect, atol=0)
    # a delta at the odd-odd point (3,3) is shared by four stencil corners
    delta = np.zeros(49)
    delta[ij_to_k(3, 3, 7)] = 1.0
    out = t.restrict @ delta
    for I, J in ((1, 1), (1, 2), (2, 1), (2, 2)):
        assert out[ij_to_k(I, J, 3)] == pytest.approx(0.125)
    assert out.sum() == pytest.approx(0.5)


def test_too_small_grid_rejected():
    with pytest.raises(ValueError):
        build_full_weighting(GridLevel(0, 1))


def test_adaptive_mask_examples():
    g = SeparableNonsmooth.hinge(1.0, np.zeros(3))
    mask = adaptive_mask(g, np.array([1.0, 0.0, -1.0]))
    assert mask.tolist() == [False, True, False]

    phi = obstacle_values(7)
    g = SeparableNonsmooth.hinge(1.0, phi)
    assert not adaptive_mask(g, phi + 1.0).any()  # strictly above everywhere

    assert not adaptive_mask(SeparableNonsmooth.zero(), np.zeros(5)).any()


def test_adaptive_restriction_identities():
    t = build_full_weighting(GridLevel(0, 7))
    rng = np.random.Generator(np.random.PCG64(2))
    v = rng.standard_normal(49)

    none = np.zeros(49, dtype=bool)
    np.testing.assert_array_equal(restrict_adaptive(t, none, v), t.restrict @ v)

    full = np.ones(49, dtype=bool)
    assert np.all(restrict_adaptive(t, full, v) == 0.0)

    one = none.copy()
    one[17] = True
    expected = t.restrict @ v - v[17] * t.restrict.toarray()[:, 17]
    np.testing.assert_allclose(restrict_adaptive(t, one, v), expected, atol=1e-14)


def test_adaptive_prolongation_identities():
    t = build_full_weighting(GridLevel(0, 7))
    rng = np.random.Generator(np.random.PCG64(4))
    w = rng.standard_normal(9)

    none = np.zeros(49, dtype=bool)
    np.testing.assert_array_equal(prolong_adaptive(t, none, w), t.prolong @ w)

    mask = none.copy()
    mask[[3, 11, 40]] = True
    out = prolong_adaptive(t, mask, w)
    assert np.all(out[mask] == 0.0)


def test_adjoint_identity_under_any_mask():
    t = build_full_weighting(GridLevel(0, 7))
    rng = np.random.Generator(np.random.PCG64(8))
    for _ in range(20):
        mask = rng.uniform(size=49) < 0.3
        v_c = rng.standard_normal(9)
        w_f = rng.standard_normal(49)
        lhs = prolong_adaptive(t, mask, v_c) @ w_f
        rhs = t.c * (v_c @ restrict_adaptive(t, mask, w_f))
        assert abs(lhs - rhs) <= 1e-12 * max(1.0, abs(lhs))


def test_line_weighting():
    t = build_line_weighting(64)
    assert t.restrict.shape == (32, 64)
    np.testing.assert_allclose(t.prolong.toarray(), 2.0 * t.restrict.toarray().T)
    interior = (t.restrict @ np.ones(64))[:-1]  # last row loses a leg at the end
    np.testing.assert_allclose(interior, 1.0, rtol=1e-15)


def test_dimension_errors():
    t = build_full_weighting(GridLevel(0, 7))
    with pytest.raises(ValueError):
        restrict_adaptive(t, np.zeros(49, dtype=bool), np.ones(10))
    with pytest.raises(ValueError):
        prolong_adaptive(t, np.zeros(49, dtype=bool), np.ones(10))
