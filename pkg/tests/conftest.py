import numpy as np
import pytest

from radialpose.evaluation import CameraIntrinsics, RelativePose, fundamental_from_pose
from radialpose.geometry import FundamentalModel
from radialpose.synth import SceneConfig, generate_pair

ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def make_pair(lam1=0.0, lam2=None, n=30, seed=0, noise=0.0, outliers=0.0, **kw):
    lam2 = lam1 if lam2 is None else lam2
    cfg = SceneConfig(n_points=max(n, 14), noise_sigma_px=noise, outlier_fraction=outliers,
                      fixed_lambdas=(lam1, lam2), equal_lambdas=(lam1 == lam2), **kw)
    p = generate_pair(cfg, seed=seed)
    if n < 14:
        p.x1, p.x2, p.inlier_truth = p.x1[:n], p.x2[:n], p.inlier_truth[:n]
    return p


def gt_model(pair):
    F = fundamental_from_pose(pair.gt_pose, pair.k1, pair.k2)
    return FundamentalModel(F, pair.gt_lambda1, pair.gt_lambda2)


def f_dist(A, B):
    """Frobenius distance up to sign between normalized matrices."""
    A = np.asarray(A) / np.linalg.norm(A)
    B = np.asarray(B) / np.linalg.norm(B)
    return min(np.linalg.norm(A - B), np.linalg.norm(A + B))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
