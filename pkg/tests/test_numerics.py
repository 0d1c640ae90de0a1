import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from radialpose.errors import AllZeroCoefficients, RankDeficient
from radialpose.numerics import cubic_real_roots, real_eigenvalues, solve_least_squares, svd

finite = st.floats(-10, 10, allow_nan=False, allow_infinity=False)


def test_svd_examples(rng):
    np.testing.assert_allclose(svd(np.eye(3))[1], [1, 1, 1])
    np.testing.assert_allclose(svd(np.diag([3.0, 2.0, 1.0]))[1], [3, 2, 1])
    m = rng.normal(size=(9, 9))
    U, S, V = svd(m)
    np.testing.assert_allclose(U.T @ U, np.eye(9), atol=1e-10)
    np.testing.assert_allclose(V.T @ V, np.eye(9), atol=1e-10)
    assert np.linalg.norm(U @ np.diag(S) @ V.T - m) <= 1e-10 * np.linalg.norm(m)


def test_svd_rejects_non_finite():
    with pytest.raises(ValueError):
        svd(np.array([[np.nan, 0.0], [0.0, 1.0]]))


@settings(max_examples=100, deadline=None)
@given(arrays(float, (7, 9), elements=finite))
def test_svd_reconstruction_property(m):
    U, S, V = svd(m)
    assert np.all(np.diff(S) <= 0)
    recon = U[:, :7] @ np.diag(S) @ V[:, :7].T
    assert np.linalg.norm(recon - m) <= 1e-9 * max(np.linalg.norm(m), 1e-300)


def test_real_eigenvalues_examples():
    np.testing.assert_allclose(real_eigenvalues(np.diag([2.0, -1.0, 0.5])), [-1, 0.5, 2])
    assert real_eigenvalues(np.array([[0.0, -1.0], [1.0, 0.0]])).size == 0
    # companion of x^3 - 6x^2 + 11x - 6
    c = np.array([[0, 1, 0], [0, 0, 1], [6, -11, 6]], dtype=float)
    np.testing.assert_allclose(real_eigenvalues(c), [1, 2, 3], atol=1e-10)


@settings(max_examples=100, deadline=None)
@given(arrays(float, (6, 6), elements=finite))
def test_real_eigenvalues_property(m):
    ev = real_eigenvalues(m)
    norm = np.linalg.norm(m)
    for e in ev:
        smin = np.linalg.svd(m - e * np.eye(6), compute_uv=False)[-1]
        assert smin <= 1e-6 * max(norm, 1.0)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2 ** 32 - 1))
def test_real_eigenvalues_transpose(seed):
    # generic (non-defective) matrices; defective ones perturb eigenvalues by eps^(1/k)
    m = np.random.default_rng(seed).normal(size=(6, 6))
    np.testing.assert_allclose(real_eigenvalues(m.T), real_eigenvalues(m), atol=1e-6)


def test_least_squares_examples(rng):
    b = rng.normal(size=(3, 2))
    np.testing.assert_allclose(solve_least_squares(np.eye(3), b), b)
    a = rng.normal(size=(4, 3))
    x = rng.normal(size=3)
    np.testing.assert_allclose(solve_least_squares(np.vstack([a, a]), np.concatenate([a @ x, a @ x])),
                               x, atol=1e-12)
    a = rng.normal(size=(12, 9))
    x = rng.normal(size=(9, 3))
    np.testing.assert_allclose(solve_least_squares(a, a @ x), x, atol=1e-9)


def test_least_squares_minimizes(rng):
    a = rng.normal(size=(20, 5))
    b = rng.normal(size=20)
    np.testing.assert_allclose(solve_least_squares(a, b), np.linalg.lstsq(a, b, rcond=None)[0],
                               atol=1e-12)


def test_least_squares_rank_deficient(rng):
    a = rng.normal(size=(10, 4))
    a[:, 3] = a[:, 0] + a[:, 1]
    with pytest.raises(RankDeficient):
        solve_least_squares(a, np.ones(10))
    with pytest.raises(RankDeficient):
        solve_least_squares(np.ones((2, 3)), np.ones(2))


def test_cubic_examples():
    np.testing.assert_allclose(cubic_real_roots(1, 0, 0, -1), [1.0])
    np.testing.assert_allclose(sorted(cubic_real_roots(1, -6, 11, -6)), [1, 2, 3], atol=1e-12)
    np.testing.assert_allclose(sorted(cubic_real_roots(0, 1, 0, -1)), [-1, 1], atol=1e-15)
    np.testing.assert_allclose(cubic_real_roots(0, 0, 2, -1), [0.5])
    with pytest.raises(AllZeroCoefficients):
        cubic_real_roots(0, 0, 0, 0)


def test_cubic_multiple_roots():
    assert np.allclose(cubic_real_roots(1, -3, 3, -1), 1.0, atol=1e-5)
    r = sorted(cubic_real_roots(1, -2, 1, 0))
    assert abs(r[0]) < 1e-12 and abs(r[-1] - 1) < 1e-6


@settings(max_examples=300, deadline=None)
@given(st.tuples(finite, finite, finite, finite).filter(lambda c: max(map(abs, c)) > 1e-3))
def test_cubic_residual_property(c):
    scale = max(map(abs, c))
    roots = cubic_real_roots(*c)
    for r in roots:
        p = ((c[0] * r + c[1]) * r + c[2]) * r + c[3]
        assert abs(p) <= 1e-8 * scale * (1 + abs(r)) ** 3
    if abs(c[0]) > 1e-12 * scale:
        assert 1 <= len(roots) <= 3


@settings(max_examples=200, deadline=None)
@given(st.lists(st.floats(-5, 5), min_size=3, max_size=3))
def test_cubic_recovers_factored_roots(rs):
    rs = sorted(rs)
    if min(np.diff(rs)) < 1e-2:
        return
    c = np.poly(rs)
    got = sorted(cubic_real_roots(*c))
    assert len(got) == 3
    np.testing.assert_allclose(got, rs, atol=1e-8)
