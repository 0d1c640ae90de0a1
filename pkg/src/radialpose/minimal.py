"""Pinhole fundamental-matrix solvers: minimal 7-point and linear 8-point."""
import numpy as np

from .errors import DegenerateSample
from .geometry import normalize_f
from .numerics import cubic_real_roots, svd

RANK_TOL = 1e-10
MAX_ALPHA = 1e6


def design_rows(x1, x2):
    """Rows ``[x x', x y', x, y x', y y', y, x', y', 1]`` so that ``row @ f = u1^T F u2``."""
    x1 = np.asarray(x1, dtype=float)
    x2 = np.asarray(x2, dtype=float)
    x, y = x1[:, 0], x1[:, 1]
    xp, yp = x2[:, 0], x2[:, 1]
    one = np.ones_like(x)
    return np.column_stack([x * xp, x * yp, x, y * xp, y * yp, y, xp, yp, one])


def _triple(a, b, c):
    return (a[0] * (b[1] * c[2] - b[2] * c[1]) - a[1] * (b[0] * c[2] - b[2] * c[0])
            + a[2] * (b[0] * c[1] - b[1] * c[0]))


def _det_cubic(F1, F2):
    """Coefficients (highest first) of det(a F1 + (1 - a) F2) = det(H + a G)."""
    h = F2.tolist()
    g = (F1 - F2).tolist()
    c0 = _triple(h[0], h[1], h[2])
    c1 = _triple(g[0], h[1], h[2]) + _triple(h[0], g[1], h[2]) + _triple(h[0], h[1], g[2])
    c2 = _triple(g[0], g[1], h[2]) + _triple(g[0], h[1], g[2]) + _triple(h[0], g[1], g[2])
    c3 = _triple(g[0], g[1], g[2])
    return c3, c2, c1, c0


def solve_7pt(x1, x2):
    """Minimal 7-point solver on undistorted points; returns 1 to 3 rank-2 matrices."""
    x1 = np.asarray(x1, dtype=float)
    x2 = np.asarray(x2, dtype=float)
    if x1.shape != (7, 2) or x2.shape != (7, 2):
        raise ValueError("solve_7pt needs exactly 7 correspondences")
    _, S, V = svd(design_rows(x1, x2))
    if S[6] <= RANK_TOL * S[0]:
        raise DegenerateSample("7-point design matrix has rank < 7")
    F1 = V[:, 7].reshape(3, 3)
    F2 = V[:, 8].reshape(3, 3)
    out = []
    for a in cubic_real_roots(*_det_cubic(F1, F2)):
        if abs(a) > MAX_ALPHA:
            continue
        out.append(normalize_f(a * F1 + (1.0 - a) * F2))
    if not out:
        raise DegenerateSample("no real root for the rank constraint")
    return out


def enforce_rank2(F):
    """Nearest rank-2 matrix in Frobenius norm, normalized."""
    U, S, V = svd(np.asarray(F, dtype=float).reshape(3, 3))
    S = S.copy()
    S[2] = 0.0
    return normalize_f(U @ np.diag(S) @ V.T)


def solve_8pt_linear(x1, x2):
    """Linear solver for >= 8 undistorted correspondences, with rank-2 projection."""
    x1 = np.asarray(x1, dtype=float)
    x2 = np.asarray(x2, dtype=float)
    if x1.shape[0] < 8 or x1.shape != x2.shape:
        raise ValueError("solve_8pt_linear needs at least 8 correspondences")
    # the thin SVD would drop the null vector when there are exactly 8 rows
    _, S, V = svd(design_rows(x1, x2), full=x1.shape[0] < 9)
    if S[7] <= RANK_TOL * S[0]:
        raise DegenerateSample("8-point design matrix has rank < 8")
    return enforce_rank2(V[:, 8].reshape(3, 3))
