"""Non-minimal radial distortion solvers based on polynomial eigenvalue problems.

Equal distortion (9+ points)::

    (A0 + l A1 + l^2 A2) f = 0

is solved for ``s = 1 / l`` with the companion matrix of
``(A2 + s A1 + s^2 A0) f = 0``.  Zero columns of ``A2`` and ``A1`` let the
18x18 companion shrink to 6x6 before the eigen-decomposition.

Different distortions (12+ points) hide the image-2 coefficient ``l2`` in the
lifted vector ``ft = [f; l2 f3; l2 f6; l2 f9]`` and leave a generalized
eigenvalue problem ``(C0 + l1 C1) ft = 0``; the eight zero columns of ``C1``
reduce it to 4x4.
"""
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateSample, RankDeficient
from .geometry import in_plausible_range, normalize_f
from .minimal import design_rows
from .numerics import real_eigenvalues, solve_least_squares, svd

SIGMA_EPS = 1e-8

# structural nonzero columns (0-based) of the coefficient matrices
EQUAL_A1_COLUMNS = (2, 5, 6, 7, 8)
EQUAL_A2_COLUMNS = (8,)
TWO_C1_COLUMNS = (6, 7, 8, 11)


@dataclass(frozen=True)
class EqualDistortionSystem:
    a0: np.ndarray
    a1: np.ndarray
    a2: np.ndarray


@dataclass(frozen=True)
class TwoDistortionSystem:
    c0: np.ndarray
    c1: np.ndarray


def _radii2(x1, x2):
    x1 = np.asarray(x1, dtype=float)
    x2 = np.asarray(x2, dtype=float)
    return x1, x2, np.sum(x1 * x1, axis=1), np.sum(x2 * x2, axis=1)


def _check_pattern(m, nonzero_cols, name):
    zero = np.setdiff1d(np.arange(m.shape[1]), nonzero_cols)
    if np.any(m[:, zero] != 0.0):
        raise AssertionError(f"{name} violates its zero-column pattern")


def build_equal_system(x1, x2):
    """Coefficient matrices of the equal-distortion constraint for distorted points."""
    x1, x2, r1, r2 = _radii2(x1, x2)
    if x1.shape[0] < 9:
        raise ValueError("equal-distortion system needs at least 9 correspondences")
    n = x1.shape[0]
    a0 = design_rows(x1, x2)
    a1 = np.zeros((n, 9))
    a1[:, 2] = x1[:, 0] * r2
    a1[:, 5] = x1[:, 1] * r2
    a1[:, 6] = x2[:, 0] * r1
    a1[:, 7] = x2[:, 1] * r1
    a1[:, 8] = r1 + r2
    a2 = np.zeros((n, 9))
    a2[:, 8] = r1 * r2
    _check_pattern(a1, EQUAL_A1_COLUMNS, "A1")
    _check_pattern(a2, EQUAL_A2_COLUMNS, "A2")
    return EqualDistortionSystem(a0, a1, a2)


def build_two_system(x1, x2):
    """Coefficient matrices of ``(C0 + l1 C1) ft = 0`` with ``ft = [f; l2 f3; l2 f6; l2 f9]``."""
    x1, x2, r1, r2 = _radii2(x1, x2)
    if x1.shape[0] < 12:
        raise ValueError("two-distortion system needs at least 12 correspondences")
    n = x1.shape[0]
    c0 = np.zeros((n, 12))
    c0[:, :9] = design_rows(x1, x2)
    c0[:, 9] = x1[:, 0] * r2
    c0[:, 10] = x1[:, 1] * r2
    c0[:, 11] = r2
    c1 = np.zeros((n, 12))
    c1[:, 6] = x2[:, 0] * r1
    c1[:, 7] = x2[:, 1] * r1
    c1[:, 8] = r1
    c1[:, 11] = r1 * r2
    _check_pattern(c1, TWO_C1_COLUMNS, "C1")
    return TwoDistortionSystem(c0, c1)


def reduced_companion(m2, m1, keep2, keep1):
    """Eigen-equivalent reduction of ``[[0, I], [m2, m1]]`` acting on ``[f; s f]``.

    Only the columns ``keep2`` of ``m2`` and ``keep1`` of ``m1`` may be
    nonzero.  A zero column of the companion contributes an eigenvalue 0
    (``l = inf``) and can be dropped together with its row; this removes every
    top-block index outside ``keep2`` and then every bottom-block index outside
    ``keep1 | keep2``.  ``m2`` / ``m1`` may be given restricted to their kept
    columns.  Returns the reduced matrix over ``[f[keep2]; s f[bottom]]``.
    """
    keep2 = list(keep2)
    bottom = sorted(set(keep1) | set(keep2))
    k2, kb = len(keep2), len(bottom)
    B = np.zeros((k2 + kb, k2 + kb))
    for i, j in enumerate(keep2):
        B[i, k2 + bottom.index(j)] = 1.0
    B[k2:, :k2] = m2[bottom][:, :k2]
    # m1 columns are ordered as keep1; scatter them into the bottom index set
    for c, j in enumerate(keep1):
        B[k2:, k2 + bottom.index(j)] = m1[bottom, c]
    return B


def _null_vector(m):
    _, _, V = svd(m, full=m.shape[0] < m.shape[1])
    return V[:, -1]


def solve_equal_9pt(x1, x2):
    """Equal unknown distortion from >= 9 distorted correspondences.

    Returns up to six ``(F, lam)`` pairs with ``lam`` in the plausible range.
    An empty list means no real solution survived.
    """
    sysm = build_equal_system(x1, x2)
    rhs = -np.column_stack([sysm.a2[:, list(EQUAL_A2_COLUMNS)], sysm.a1[:, list(EQUAL_A1_COLUMNS)]])
    try:
        X = solve_least_squares(sysm.a0, rhs)
    except RankDeficient as exc:
        raise DegenerateSample("A0 is rank deficient") from exc
    k = len(EQUAL_A2_COLUMNS)
    B = reduced_companion(X[:, :k], X[:, k:], EQUAL_A2_COLUMNS, EQUAL_A1_COLUMNS)
    out = []
    for s in real_eigenvalues(B):
        if abs(s) <= SIGMA_EPS:
            continue
        lam = 1.0 / float(s)
        if not in_plausible_range(lam):
            continue
        f = _null_vector(sysm.a0 + lam * sysm.a1 + lam * lam * sysm.a2)
        out.append((normalize_f(f.reshape(3, 3)), lam))
    return out


def lifted_lambda(ft):
    """Least-squares estimate of the hidden coefficient from ``[f; l f3; l f6; l f9]``."""
    base = ft[[2, 5, 8]]
    den = base @ base
    if den == 0.0:
        return np.nan
    return float(ft[9:12] @ base / den)


def solve_two_12pt(x1, x2, consistency_tol=None):
    """Different unknown distortions from >= 12 distorted correspondences.

    Returns up to four ``(F, lam1, lam2)`` triples with both coefficients in
    the plausible range.  The linearization ignores that the last three
    entries of the lifted vector are ``lam2`` times entries of ``f``, so some
    eigenvalues can be spurious.  With ``consistency_tol`` set, candidates
    whose lifted vector deviates from that structure by more than
    ``consistency_tol * ||ft||`` are dropped; by default every real candidate
    is returned and left to scoring.
    """
    sysm = build_two_system(x1, x2)
    cols = list(TWO_C1_COLUMNS)
    try:
        X = solve_least_squares(sysm.c0, -sysm.c1[:, cols])
    except RankDeficient as exc:
        raise DegenerateSample("C0 is rank deficient") from exc
    D = X[cols, :]
    out = []
    for s in real_eigenvalues(D):
        if abs(s) <= SIGMA_EPS:
            continue
        lam1 = 1.0 / float(s)
        if not in_plausible_range(lam1):
            continue
        ft = _null_vector(sysm.c0 + lam1 * sysm.c1)
        lam2 = lifted_lambda(ft)
        if not np.isfinite(lam2) or not in_plausible_range(lam2):
            continue
        if consistency_tol is not None:
            dev = np.max(np.abs(ft[9:12] - lam2 * ft[[2, 5, 8]]))
            if dev > consistency_tol * np.linalg.norm(ft):
                continue
        out.append((normalize_f(ft[:9].reshape(3, 3)), lam1, lam2))
    return out
