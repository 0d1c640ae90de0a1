"""Division-model undistortion, its closed-form inverse and epipolar residuals.

Points are numpy arrays of shape ``(2,)`` or ``(N, 2)`` in normalized image
coordinates (image center at the origin, longer side of length 1).  The
epipolar convention used everywhere is ``u(x1, l1)^T F u(x2, l2) = 0`` where
``u(x, l) = [x, y, 1 + l * (x^2 + y^2)]``.
"""
from dataclasses import dataclass

import numpy as np

from .errors import DegeneratePoint, NoRealPreimage

PLAUSIBLE_LAMBDA = (-2.0, 0.5)
W_EPS = 1e-12
R_EPS = 1e-12
GRAD_EPS = 1e-14


def normalize_f(F):
    """Scale F to unit Frobenius norm with its largest-magnitude entry positive."""
    F = np.asarray(F, dtype=float).reshape(3, 3)
    n = np.linalg.norm(F)
    if n == 0.0:
        return F.copy()
    F = F / n
    # argmax picks the first index on exact ties (row-major)
    k = np.argmax(np.abs(F).ravel())
    if F.flat[k] < 0:
        F = -F
    return F


def in_plausible_range(lam):
    return PLAUSIBLE_LAMBDA[0] <= lam <= PLAUSIBLE_LAMBDA[1]


@dataclass(frozen=True, eq=False)
class FundamentalModel:
    """A fundamental matrix together with the undistortion coefficients of both images."""

    F: np.ndarray
    lambda1: float = 0.0
    lambda2: float = 0.0

    def __post_init__(self):
        F = normalize_f(self.F)
        F.setflags(write=False)
        object.__setattr__(self, "F", F)
        object.__setattr__(self, "lambda1", float(self.lambda1))
        object.__setattr__(self, "lambda2", float(self.lambda2))

    @property
    def plausible(self):
        return in_plausible_range(self.lambda1) and in_plausible_range(self.lambda2)

    def __eq__(self, other):
        if not isinstance(other, FundamentalModel):
            return NotImplemented
        return (np.array_equal(self.F, other.F) and self.lambda1 == other.lambda1
                and self.lambda2 == other.lambda2)


def homogeneous_undistorted(p, lam):
    """Return ``[x, y, 1 + lam * r^2]`` for every point (no division, never raises)."""
    p = np.asarray(p, dtype=float)
    r2 = np.sum(p * p, axis=-1, keepdims=True)
    return np.concatenate([p, 1.0 + lam * r2], axis=-1)


def undistort(p, lam):
    """Undistort points with the one-parameter division model.

    Raises DegeneratePoint if any point is mapped to infinity.
    """
    h = homogeneous_undistorted(p, lam)
    w = h[..., 2:]
    if np.any(np.abs(w) <= W_EPS):
        raise DegeneratePoint(f"division model maps a point to infinity (lambda={lam})")
    return h[..., :2] / w


def distort(q, lam):
    """Inverse of :func:`undistort`: map undistorted points back to distorted ones.

    Uses ``r_d = (1 - sqrt(1 - 4 lam r_u^2)) / (2 lam r_u)`` and
    ``x_d = x_u (1 + lam r_d^2)``.  Points at the distortion center and
    ``lam == 0`` are returned unchanged.  ``lam`` may be an array that
    broadcasts against ``q[..., :1]`` (one coefficient per point).
    """
    q = np.asarray(q, dtype=float)
    lam = np.asarray(lam, dtype=float)
    if np.all(lam == 0.0):
        return q.copy()
    ru = np.sqrt(np.sum(q * q, axis=-1, keepdims=True))
    disc = 1.0 - 4.0 * lam * ru * ru
    if np.any(disc < 0.0):
        raise NoRealPreimage(f"no real distorted radius for lambda={lam}")
    safe_ru = np.where(ru < R_EPS, 1.0, ru)
    # 2 / (1 + sqrt(disc)) * r_u is the same root without cancellation for small lam * r_u
    rd = 2.0 * safe_ru / (1.0 + np.sqrt(disc))
    out = q * (1.0 + lam * rd * rd)
    return np.where(ru < R_EPS, q, out)


def normalize_point(px, width, height):
    """Pixel coordinates to centered coordinates scaled by the longer image side."""
    if width <= 0 or height <= 0:
        raise ValueError("image size must be positive")
    px = np.asarray(px, dtype=float)
    s = float(max(width, height))
    return (px - np.array([width / 2.0, height / 2.0])) / s


def epipolar_residual_algebraic(model, x1, x2):
    """Algebraic residual ``u(x1, l1)^T F u(x2, l2)`` per correspondence."""
    h1 = homogeneous_undistorted(x1, model.lambda1)
    h2 = homogeneous_undistorted(x2, model.lambda2)
    if np.any(np.abs(h1[..., 2]) <= W_EPS) or np.any(np.abs(h2[..., 2]) <= W_EPS):
        raise DegeneratePoint("division model maps a point to infinity")
    return np.einsum("...i,ij,...j->...", h1, model.F, h2)


def lift(x, lam):
    """Homogeneous undistorted points and the Jacobian factor ``2 lam x`` of their third coordinate."""
    x = np.atleast_2d(np.asarray(x, dtype=float))
    return homogeneous_undistorted(x, lam), 2.0 * lam * x


def residual_gradient(F, lam1, lam2, x1, x2):
    """Value and gradient of g = u1^T F u2 with respect to (x1, y1, x2, y2)."""
    h1, j1 = lift(x1, lam1)
    h2, j2 = lift(x2, lam2)
    Fh2 = h2 @ F.T
    Fth1 = h1 @ F
    g = np.sum(h1 * Fh2, axis=1)
    grad = np.hstack([Fh2[:, :2] + j1 * Fh2[:, 2:3], Fth1[:, :2] + j2 * Fth1[:, 2:3]])
    return g, grad, h1[:, 2], h2[:, 2]


def sampson_lifted(F, h1, j1, h2, j2):
    """Distortion-aware Sampson residual from pre-lifted points (see :func:`lift`)."""
    Fh2 = h2 @ F.T
    Fth1 = h1 @ F
    g = np.einsum("ij,ij->i", h1, Fh2)
    d1 = Fh2[:, :2] + j1 * Fh2[:, 2:3]
    d2 = Fth1[:, :2] + j2 * Fth1[:, 2:3]
    gn = np.sqrt(np.einsum("ij,ij->i", d1, d1) + np.einsum("ij,ij->i", d2, d2))
    bad = (gn < GRAD_EPS) | (np.abs(h1[:, 2]) <= W_EPS) | (np.abs(h2[:, 2]) <= W_EPS)
    with np.errstate(divide="ignore", invalid="ignore"):
        r = np.abs(g) / gn
    r[bad] = np.inf
    return r


def sampson_residual_distorted(model, x1, x2):
    """First-order Sampson distance measured in the distorted images.

    The composite constraint is linearized through the undistortion Jacobian,
    so the residual is in normalized distorted-coordinate units.  Points with
    a vanishing gradient, or that the model sends to infinity, get ``inf``.
    """
    scalar = np.asarray(x1).ndim == 1
    h1, j1 = lift(x1, model.lambda1)
    h2, j2 = lift(x2, model.lambda2)
    r = sampson_lifted(model.F, h1, j1, h2, j2)
    return r[0] if scalar else r
