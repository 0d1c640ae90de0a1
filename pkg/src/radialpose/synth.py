"""Synthetic two-view scenes with radial distortion, noise and outliers."""
from dataclasses import dataclass, field
from typing import Optional, Tuple

import numpy as np

from .errors import ConfigError, GenerationFailure, NoRealPreimage
from .evaluation import CameraIntrinsics, RelativePose
from .geometry import distort

SCENARIOS = ("scenario_a", "scenario_b", "scenario_c")

# Scenario A: density c on [-1.5, 0], falling linearly to c/2 at -1.8
_A_C = 1.0 / (1.5 + 0.3 * 0.75)
_A_TAIL = 0.3 * 0.75 * _A_C

_MASK64 = (1 << 64) - 1


def mix_seed(seed, index):
    """splitmix64 of ``seed ^ index``: decorrelated per-pair seeds."""
    z = (int(seed) ^ int(index)) & _MASK64
    z = (z + 0x9E3779B97F4A7C15) & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


@dataclass(frozen=True)
class SceneConfig:
    n_points: int = 200
    depth_range: Tuple[float, float] = (2.0, 10.0)
    max_rotation_deg: float = 30.0
    noise_sigma_px: float = 0.5
    nominal_longer_side: float = 1000.0
    outlier_fraction: float = 0.0
    lambda_mode: str = "fixed"
    fixed_lambdas: Tuple[float, float] = (0.0, 0.0)
    equal_lambdas: bool = True
    focal: float = 1.0
    seed: int = 0

    def __post_init__(self):
        if self.n_points < 14:
            raise ConfigError("n_points: must be at least 14")
        if not 0.0 <= self.outlier_fraction < 0.9:
            raise ConfigError("outlier_fraction: must be in [0, 0.9)")
        if self.lambda_mode not in ("fixed",) + SCENARIOS:
            raise ConfigError(f"lambda_mode: unknown mode {self.lambda_mode!r}")
        lo, hi = self.depth_range
        if not 0.0 < lo <= hi:
            raise ConfigError("depth_range: need 0 < near <= far")
        if self.noise_sigma_px < 0:
            raise ConfigError("noise_sigma_px: must be non-negative")
        if self.focal <= 0 or self.nominal_longer_side <= 0:
            raise ConfigError("focal and nominal_longer_side must be positive")
        if not 0.0 <= self.max_rotation_deg <= 180.0:
            raise ConfigError("max_rotation_deg: must be in [0, 180]")


@dataclass(eq=False)
class GroundTruthPair:
    pair_id: int
    x1: np.ndarray
    x2: np.ndarray
    gt_pose: RelativePose
    gt_lambda1: float
    gt_lambda2: float
    inlier_truth: np.ndarray
    k1: CameraIntrinsics
    k2: CameraIntrinsics
    meta: dict = field(default_factory=dict)

    def __eq__(self, other):
        if not isinstance(other, GroundTruthPair):
            return NotImplemented
        return (self.pair_id == other.pair_id
                and np.array_equal(self.x1, other.x1) and np.array_equal(self.x2, other.x2)
                and np.array_equal(self.gt_pose.r, other.gt_pose.r)
                and np.array_equal(self.gt_pose.t, other.gt_pose.t)
                and self.gt_lambda1 == other.gt_lambda1 and self.gt_lambda2 == other.gt_lambda2
                and np.array_equal(self.inlier_truth, other.inlier_truth)
                and np.array_equal(self.k1.k, other.k1.k) and np.array_equal(self.k2.k, other.k2.k))


def sample_lambda(mode, rng):
    """Draw an undistortion coefficient for one of the distortion scenarios."""
    if mode == "scenario_b":
        return float(rng.uniform(-0.3, 0.0))
    if mode == "scenario_c":
        return float(rng.uniform(-1.8, -0.5))
    if mode == "scenario_a":
        u = rng.uniform()
        if u >= _A_TAIL:
            return float(-1.5 + 1.5 * (u - _A_TAIL) / (1.0 - _A_TAIL))
        # tail CDF from -1.8: c (s/2 + s^2/1.2), s in [0, 0.3]
        m = u / _A_C
        s = (-0.5 + np.sqrt(0.25 + 4.0 * m / 1.2)) / (2.0 / 1.2)
        return float(-1.8 + s)
    raise ConfigError(f"lambda_mode: cannot sample from {mode!r}")


def sweep_levels():
    """Distortion levels of the robustness sweep, from none to lambda = -1.8."""
    return [round(-0.3 * i, 10) + 0.0 for i in range(7)]


def rotation_about(axis, angle):
    axis = np.asarray(axis, dtype=float)
    axis = axis / np.linalg.norm(axis)
    K = np.array([[0.0, -axis[2], axis[1]], [axis[2], 0.0, -axis[0]], [-axis[1], axis[0], 0.0]])
    return np.eye(3) + np.sin(angle) * K + (1.0 - np.cos(angle)) * K @ K


def _look_at(center, target):
    # rows are the camera axes expressed in world coordinates
    z = target - center
    z = z / np.linalg.norm(z)
    x = np.cross([0.0, 1.0, 0.0], z)
    x = x / np.linalg.norm(x)
    y = np.cross(z, x)
    return np.vstack([x, y, z])


def sample_pose(cfg, rng):
    """Unit-baseline second camera looking at the middle of the depth range."""
    limit = np.radians(cfg.max_rotation_deg)
    target = np.array([0.0, 0.0, 0.5 * sum(cfg.depth_range)])
    for _ in range(1000):
        phi = rng.uniform(0.0, 2.0 * np.pi)
        c = np.array([np.cos(phi), np.sin(phi), rng.uniform(-0.5, 0.5)])
        c = c / np.linalg.norm(c)
        R = _look_at(c, target)
        axis = rng.normal(size=3)
        R = rotation_about(axis, rng.uniform(0.0, limit / 3.0)) @ R
        angle = np.arccos(np.clip((np.trace(R) - 1.0) / 2.0, -1.0, 1.0))
        if angle <= limit:
            return RelativePose(R, -R @ c)
    raise GenerationFailure("could not sample a pose within the rotation bound")


def _draw_lambdas(cfg, rng):
    if cfg.lambda_mode == "fixed":
        l1, l2 = cfg.fixed_lambdas
        return float(l1), float(l2 if not cfg.equal_lambdas else l1)
    l1 = sample_lambda(cfg.lambda_mode, rng)
    l2 = l1 if cfg.equal_lambdas else sample_lambda(cfg.lambda_mode, rng)
    return l1, l2


def _in_square(p):
    return np.all(np.abs(p) <= 0.5, axis=1)


def generate_pair(cfg, pair_id=0, seed: Optional[int] = None):
    """Generate one noisy, distorted correspondence set with ground truth.

    Points are sampled in the pinhole frustum of camera 1, must project into
    both images before and after distortion, then get Gaussian noise and a
    fixed fraction of uniform outliers.
    """
    rng = np.random.default_rng(cfg.seed if seed is None else seed)
    lam1, lam2 = _draw_lambdas(cfg, rng)
    pose = sample_pose(cfg, rng)
    k = CameraIntrinsics.from_focal(cfg.focal)
    n = cfg.n_points
    x1s, x2s = [], []
    have, drawn = 0, 0
    while have < n:
        if drawn >= 100 * n:
            raise GenerationFailure("too few points visible in both images")
        m = 2 * n
        drawn += m
        u1 = rng.uniform(-0.5, 0.5, size=(m, 2))
        z = rng.uniform(*cfg.depth_range, size=m)
        X = np.column_stack([u1 / cfg.focal, np.ones(m)]) * z[:, None]
        X2 = X @ pose.r.T + pose.t
        ok = X2[:, 2] > 1e-6
        u2 = cfg.focal * X2[:, :2] / np.where(ok, X2[:, 2], 1.0)[:, None]
        ok &= _in_square(u2)
        u1, u2 = u1[ok], u2[ok]
        try:
            d1 = distort(u1, lam1)
            d2 = distort(u2, lam2)
        except NoRealPreimage:
            # positive coefficients: keep only points with a real preimage
            g1 = 1.0 - 4.0 * lam1 * np.sum(u1 * u1, axis=1) >= 0
            g2 = 1.0 - 4.0 * lam2 * np.sum(u2 * u2, axis=1) >= 0
            u1, u2 = u1[g1 & g2], u2[g1 & g2]
            d1, d2 = distort(u1, lam1), distort(u2, lam2)
        vis = _in_square(d1) & _in_square(d2)
        x1s.append(d1[vis])
        x2s.append(d2[vis])
        have += int(vis.sum())
    x1 = np.concatenate(x1s)[:n]
    x2 = np.concatenate(x2s)[:n]
    sigma = cfg.noise_sigma_px / cfg.nominal_longer_side
    if sigma > 0:
        x1 = x1 + rng.normal(scale=sigma, size=x1.shape)
        x2 = x2 + rng.normal(scale=sigma, size=x2.shape)
    inlier = np.ones(n, dtype=bool)
    n_out = int(round(cfg.outlier_fraction * n))
    if n_out:
        idx = rng.choice(n, size=n_out, replace=False)
        x1[idx] = rng.uniform(-0.5, 0.5, size=(n_out, 2))
        x2[idx] = rng.uniform(-0.5, 0.5, size=(n_out, 2))
        inlier[idx] = False
    return GroundTruthPair(pair_id, x1, x2, pose, lam1, lam2, inlier, k, k)


def generate_dataset(cfg, n_pairs, seed=None):
    """``n_pairs`` independent pairs, pair ``i`` seeded with ``mix_seed(seed, i)``."""
    base = cfg.seed if seed is None else seed
    return [generate_pair(cfg, pair_id=i, seed=mix_seed(base, i)) for i in range(n_pairs)]
