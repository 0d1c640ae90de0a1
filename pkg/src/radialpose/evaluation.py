"""Relative pose recovery from fundamental models and the error metrics.

Pose convention: a point ``X`` in camera-1 coordinates maps to
``R @ X + t`` in camera 2.  With the epipolar convention ``u1^T F u2 = 0``
the essential matrix is ``E = K1^T F K2`` and equals ``([t]_x R)^T``.
"""
from dataclasses import dataclass

import numpy as np

from .errors import DecompositionAmbiguous, EmptyInput, RadialPoseError, ZeroVector
from .geometry import FundamentalModel, normalize_f, undistort
from .numerics import svd

AUC_THRESHOLDS = (5.0, 10.0, 20.0)


@dataclass(frozen=True, eq=False)
class CameraIntrinsics:
    k: np.ndarray

    def __post_init__(self):
        k = np.asarray(self.k, dtype=float).reshape(3, 3)
        if k[0, 0] <= 0 or k[1, 1] <= 0 or k[2, 2] != 1.0 or np.any(np.tril(k, -1) != 0):
            raise ValueError("intrinsics must be upper triangular with positive focals and k[2,2] = 1")
        k.setflags(write=False)
        object.__setattr__(self, "k", k)

    @classmethod
    def from_focal(cls, focal, cx=0.0, cy=0.0):
        return cls(np.array([[focal, 0.0, cx], [0.0, focal, cy], [0.0, 0.0, 1.0]]))

    def calibrate(self, p):
        """Image points (undistorted) to normalized camera coordinates."""
        p = np.asarray(p, dtype=float)
        k = self.k
        y = (p[..., 1] - k[1, 2]) / k[1, 1]
        x = (p[..., 0] - k[0, 2] - k[0, 1] * y) / k[0, 0]
        return np.stack([x, y], axis=-1)


@dataclass(frozen=True, eq=False)
class RelativePose:
    r: np.ndarray
    t: np.ndarray

    def __post_init__(self):
        t = np.asarray(self.t, dtype=float)
        n = np.linalg.norm(t)
        if n == 0.0:
            raise ZeroVector("translation must be nonzero")
        object.__setattr__(self, "r", np.asarray(self.r, dtype=float).reshape(3, 3))
        object.__setattr__(self, "t", t / n)


@dataclass(frozen=True)
class PoseErrorReport:
    rot_err: float
    trans_err: float
    pose_err: float
    lambda_err: float

    @classmethod
    def failed(cls, lambda_err=np.inf):
        return cls(np.inf, np.inf, np.inf, lambda_err)


def skew(v):
    return np.array([[0.0, -v[2], v[1]], [v[2], 0.0, -v[0]], [-v[1], v[0], 0.0]])


def essential_from_pose(pose):
    """Essential matrix in the ``x1^T E x2 = 0`` convention."""
    return (skew(pose.t) @ pose.r).T


def fundamental_from_pose(pose, k1, k2):
    E = essential_from_pose(pose)
    return normalize_f(np.linalg.inv(k1.k).T @ E @ np.linalg.inv(k2.k))


def essential_from_fundamental(F, k1, k2):
    """``E = K1^T F K2`` projected onto singular values ``(s, s, 0)`` and normalized."""
    E = k1.k.T @ np.asarray(F, dtype=float).reshape(3, 3) @ k2.k
    U, S, V = svd(E)
    s = 0.5 * (S[0] + S[1])
    return normalize_f(U @ np.diag([s, s, 0.0]) @ V.T)


def triangulate(P1, P2, x1, x2):
    """Linear (DLT) triangulation of calibrated correspondences, one point per row."""
    A = np.stack([
        x1[:, 0, None] * P1[2] - P1[0],
        x1[:, 1, None] * P1[2] - P1[1],
        x2[:, 0, None] * P2[2] - P2[0],
        x2[:, 1, None] * P2[2] - P2[1],
    ], axis=1)
    _, _, Vt = np.linalg.svd(A)
    X = Vt[:, -1, :]
    return X[:, :3] / X[:, 3:4]


def pose_candidates(E):
    """The four ``(R, t)`` decompositions of an essential matrix (``x1^T E x2 = 0``)."""
    U, _, V = svd(np.asarray(E, dtype=float).T)
    if np.linalg.det(U) < 0:
        U = -U
    if np.linalg.det(V) < 0:
        V = -V
    W = np.array([[0.0, -1.0, 0.0], [1.0, 0.0, 0.0], [0.0, 0.0, 1.0]])
    t = U[:, 2]
    out = []
    for R in (U @ W @ V.T, U @ W.T @ V.T):
        out.append((R, t))
        out.append((R, -t))
    return out


def recover_pose(E, x1, x2):
    """Pick the decomposition of E that puts most points in front of both cameras.

    ``x1``/``x2`` are undistorted, calibrated coordinates.  Ties in the
    cheirality count fall back to the smaller summed reprojection residual.
    """
    x1 = np.atleast_2d(np.asarray(x1, dtype=float))
    x2 = np.atleast_2d(np.asarray(x2, dtype=float))
    if x1.size == 0:
        raise EmptyInput("need at least one correspondence")
    P1 = np.hstack([np.eye(3), np.zeros((3, 1))])
    scored = []
    for R, t in pose_candidates(E):
        P2 = np.hstack([R, t[:, None]])
        X = triangulate(P1, P2, x1, x2)
        X2 = X @ R.T + t
        good = (X[:, 2] > 0) & (X2[:, 2] > 0)
        with np.errstate(divide="ignore", invalid="ignore"):
            e1 = np.linalg.norm(X[:, :2] / X[:, 2:3] - x1, axis=1)
            e2 = np.linalg.norm(X2[:, :2] / X2[:, 2:3] - x2, axis=1)
        res = float(np.nansum(e1 + e2))
        scored.append((int(good.sum()), res, R, t))
    order = sorted(range(4), key=lambda i: (-scored[i][0], scored[i][1]))
    a, b = scored[order[0]], scored[order[1]]
    if a[0] == b[0] and a[1] == b[1]:
        raise DecompositionAmbiguous("cheirality and residual tie between decompositions")
    return RelativePose(a[2], a[3])


def rotation_error(r_est, r_gt):
    """Angle in degrees of the rotation taking ``r_est`` to ``r_gt``.

    Equal to ``arccos((trace(r_est^T r_gt) - 1) / 2)``; the atan2 form keeps
    full precision for tiny angles, where arccos bottoms out near 1e-6 degrees.
    """
    m = np.asarray(r_est, dtype=float).T @ np.asarray(r_gt, dtype=float)
    c = (np.trace(m) - 1.0) / 2.0
    s = 0.5 * np.linalg.norm([m[2, 1] - m[1, 2], m[0, 2] - m[2, 0], m[1, 0] - m[0, 1]])
    return float(np.degrees(np.arctan2(s, c)))


def translation_error(t_est, t_gt):
    """Angle in degrees between translation directions (sign is kept)."""
    a = np.asarray(t_est, dtype=float)
    b = np.asarray(t_gt, dtype=float)
    na, nb = np.linalg.norm(a), np.linalg.norm(b)
    if na == 0.0 or nb == 0.0:
        raise ZeroVector("translation must be nonzero")
    a, b = a / na, b / nb
    return float(np.degrees(np.arctan2(np.linalg.norm(np.cross(a, b)), a @ b)))


def pose_auc(errors, thresholds=AUC_THRESHOLDS):
    """Exact area under the recall curve up to each threshold, ``mean(max(0, 1 - e / t))``."""
    e = np.asarray(errors, dtype=float)
    if e.size == 0:
        raise EmptyInput("no errors given")
    return [float(np.mean(np.clip(1.0 - e / t, 0.0, None))) for t in thresholds]


def distortion_error(est, gt_lambda1, gt_lambda2):
    """Mean absolute error of the two undistortion coefficients.

    For equal distortion this is just ``|lam_est - lam_gt|``.
    """
    return 0.5 * (abs(est.lambda1 - gt_lambda1) + abs(est.lambda2 - gt_lambda2))


def evaluate_model(model, x1, x2, k1, k2, gt_pose, gt_lambda1, gt_lambda2):
    """Full error report for an estimated model, using the given correspondences for cheirality.

    ``x1``/``x2`` are the distorted points (typically the inliers).
    """
    lam_err = distortion_error(model, gt_lambda1, gt_lambda2)
    try:
        E = essential_from_fundamental(model.F, k1, k2)
        c1 = k1.calibrate(undistort(x1, model.lambda1))
        c2 = k2.calibrate(undistort(x2, model.lambda2))
        pose = recover_pose(E, c1, c2)
    except (RadialPoseError, np.linalg.LinAlgError):
        return PoseErrorReport.failed(lam_err)
    re = rotation_error(pose.r, gt_pose.r)
    te = translation_error(pose.t, gt_pose.t)
    return PoseErrorReport(re, te, max(re, te), lam_err)


def aggregate(reports):
    """Average and median of each error field plus the AUC triple of the pose error."""
    if len(reports) == 0:
        raise EmptyInput("no reports")
    out = {}
    for field in ("rot_err", "trans_err", "pose_err", "lambda_err"):
        v = np.array([getattr(r, field) for r in reports], dtype=float)
        out[field] = {"avg": float(np.mean(v)), "median": float(np.median(v))}
    out["auc"] = dict(zip(("auc5", "auc10", "auc20"),
                          pose_auc([r.pose_err for r in reports])))
    return out
