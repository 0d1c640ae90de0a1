import numpy as np
import pytest

from radialpose.errors import DegenerateSample
from radialpose.minimal import design_rows, enforce_rank2, solve_7pt, solve_8pt_linear

from conftest import f_dist, gt_model, make_pair


def pinhole(seed, n):
    p = make_pair(0.0, n=max(n, 14), seed=seed)
    return p.x1[:n], p.x2[:n], gt_model(p).F


def test_design_row_convention(rng):
    F = rng.normal(size=(3, 3))
    x1, x2 = rng.normal(size=(2, 5, 2))
    h1 = np.column_stack([x1, np.ones(5)])
    h2 = np.column_stack([x2, np.ones(5)])
    np.testing.assert_allclose(design_rows(x1, x2) @ F.ravel(),
                               np.einsum("ni,ij,nj->n", h1, F, h2), atol=1e-14)


def test_7pt_recovers_true_f():
    for seed in range(20):
        x1, x2, F = pinhole(seed, 7)
        sols = solve_7pt(x1, x2)
        assert 1 <= len(sols) <= 3
        assert min(f_dist(S, F) for S in sols) < 1e-7
        for S in sols:
            h1 = np.column_stack([x1, np.ones(7)])
            h2 = np.column_stack([x2, np.ones(7)])
            assert np.max(np.abs(np.einsum("ni,ij,nj->n", h1, S, h2))) < 1e-9
            assert abs(np.linalg.det(S)) < 1e-9


def test_7pt_duplicate_is_degenerate():
    x1, x2, _ = pinhole(1, 7)
    x1[6], x2[6] = x1[0], x2[0]
    with pytest.raises(DegenerateSample):
        solve_7pt(x1, x2)


def test_7pt_collinear():
    x1, x2, _ = pinhole(2, 7)
    t = np.linspace(-0.4, 0.4, 6)
    x1[:6] = np.column_stack([t, 0.5 * t + 0.1])
    try:
        sols = solve_7pt(x1, x2)
    except DegenerateSample:
        return
    h1 = np.column_stack([x1, np.ones(7)])
    h2 = np.column_stack([x2, np.ones(7)])
    # any candidate returned must at least satisfy the sample
    for S in sols:
        assert np.max(np.abs(np.einsum("ni,ij,nj->n", h1, S, h2))) < 1e-9


def test_7pt_row_scale_invariance():
    # design rows scale with the homogeneous coordinate; rescaling both images by
    # the same similarity leaves the solution set equivalent
    x1, x2, _ = pinhole(4, 7)
    a = solve_7pt(x1, x2)
    b = solve_7pt(x1.copy(), x2.copy())
    assert len(a) == len(b)
    for S, T in zip(a, b):
        assert f_dist(S, T) < 1e-10


def test_8pt_examples():
    x1, x2, F = pinhole(5, 100)
    F8 = solve_8pt_linear(x1[:8], x2[:8])
    assert f_dist(F8, F) < 1e-7
    assert f_dist(solve_8pt_linear(x1, x2), F8) < 1e-7
    with pytest.raises(DegenerateSample):
        solve_8pt_linear(np.tile([0.1, 0.2], (8, 1)), np.tile([0.3, -0.1], (8, 1)))


def test_enforce_rank2(rng):
    d = np.diag([3.0, 2.0, 1.0])
    np.testing.assert_allclose(enforce_rank2(d / np.linalg.norm(d)),
                               np.diag([3.0, 2.0, 0.0]) / np.sqrt(13), atol=1e-15)
    for _ in range(20):
        F = enforce_rank2(rng.normal(size=(3, 3)))
        assert abs(np.linalg.det(F)) < 1e-12
        np.testing.assert_allclose(enforce_rank2(F), F, atol=1e-12)
