import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from radialpose.errors import EmptyInput, ZeroVector
from radialpose.evaluation import (CameraIntrinsics, PoseErrorReport, RelativePose, aggregate,
                                   distortion_error, essential_from_fundamental,
                                   essential_from_pose, evaluate_model, fundamental_from_pose,
                                   pose_auc, recover_pose, rotation_error, translation_error)
from radialpose.geometry import FundamentalModel, undistort
from radialpose.synth import rotation_about

from conftest import f_dist, gt_model, make_pair


def random_rotation(rng):
    q = rng.normal(size=4)
    w, x, y, z = q / np.linalg.norm(q)
    return np.array([
        [1 - 2 * (y * y + z * z), 2 * (x * y - z * w), 2 * (x * z + y * w)],
        [2 * (x * y + z * w), 1 - 2 * (x * x + z * z), 2 * (y * z - x * w)],
        [2 * (x * z - y * w), 2 * (y * z + x * w), 1 - 2 * (x * x + y * y)],
    ])


def test_intrinsics_validation():
    CameraIntrinsics.from_focal(1.2, 0.01, -0.02)
    with pytest.raises(ValueError):
        CameraIntrinsics(np.diag([-1.0, 1.0, 1.0]))
    with pytest.raises(ValueError):
        CameraIntrinsics(np.diag([1.0, 1.0, 2.0]))


def test_relative_pose_normalizes_translation():
    assert np.linalg.norm(RelativePose(np.eye(3), [0, 0, 3]).t) == 1.0
    with pytest.raises(ZeroVector):
        RelativePose(np.eye(3), [0, 0, 0])


def test_essential_identity_intrinsics(rng):
    k = CameraIntrinsics(np.eye(3))
    F = rng.normal(size=(3, 3))
    E = essential_from_fundamental(F, k, k)
    s = np.linalg.svd(E, compute_uv=False)
    assert abs(s[0] - s[1]) < 1e-12 and s[2] < 1e-12
    U, S, Vt = np.linalg.svd(F)
    proj = U @ np.diag([1, 1, 0]) @ Vt
    assert f_dist(E, proj) < 1e-12


def test_essential_round_trip_and_scale(rng):
    k1 = CameraIntrinsics.from_focal(0.9, 0.01, 0.02)
    k2 = CameraIntrinsics.from_focal(1.3, -0.03, 0.0)
    for _ in range(20):
        pose = RelativePose(random_rotation(rng), rng.normal(size=3))
        F = fundamental_from_pose(pose, k1, k2)
        E = essential_from_pose(pose)
        assert f_dist(essential_from_fundamental(F, k1, k2), E) < 1e-9
        np.testing.assert_allclose(essential_from_fundamental(5 * F, k1, k2),
                                   essential_from_fundamental(F, k1, k2), atol=1e-12)


def test_recover_pose_noiseless():
    worst_r = worst_t = 0.0
    for seed in range(50):
        p = make_pair(0.0, n=30, seed=seed)
        E = essential_from_pose(p.gt_pose)
        c1, c2 = p.k1.calibrate(p.x1), p.k2.calibrate(p.x2)
        pose = recover_pose(E, c1, c2)
        worst_r = max(worst_r, rotation_error(pose.r, p.gt_pose.r))
        worst_t = max(worst_t, translation_error(pose.t, p.gt_pose.t))
    assert worst_r < 1e-6 and worst_t < 1e-4


def test_recover_pose_forward_motion():
    rng = np.random.default_rng(3)
    X = np.column_stack([rng.uniform(-1, 1, 20), rng.uniform(-1, 1, 20), rng.uniform(4, 8, 20)])
    R = rotation_about([0, 1, 0], np.radians(5))
    t = np.array([0.05, 0.0, -1.0])
    X2 = X @ R.T + t
    pose = recover_pose(essential_from_pose(RelativePose(R, t)), X[:, :2] / X[:, 2:],
                        X2[:, :2] / X2[:, 2:])
    assert rotation_error(pose.r, R) < 1e-6
    assert translation_error(pose.t, t / np.linalg.norm(t)) < 1e-4


def test_recover_pose_single_point():
    R = rotation_about([0, 0, 1], 0.1)
    t = np.array([1.0, 0.0, 0.0])
    X = np.array([[0.2, -0.1, 5.0]])
    X2 = X @ R.T + t
    pose = recover_pose(essential_from_pose(RelativePose(R, t)), X[:, :2] / X[:, 2:],
                        X2[:, :2] / X2[:, 2:])
    assert rotation_error(pose.r, R) < 1e-6
    assert translation_error(pose.t, t) < 1e-4
    with pytest.raises(EmptyInput):
        recover_pose(np.eye(3), np.empty((0, 2)), np.empty((0, 2)))


def test_rotation_error_matches_arccos(rng):
    for _ in range(100):
        A, B = random_rotation(rng), random_rotation(rng)
        c = np.clip((np.trace(A.T @ B) - 1) / 2, -1, 1)
        assert rotation_error(A, B) == pytest.approx(np.degrees(np.arccos(c)), abs=1e-6)


def test_rotation_error_examples(rng):
    assert rotation_error(np.eye(3), np.eye(3)) == 0.0
    assert rotation_error(rotation_about([0, 0, 1], np.radians(10)), np.eye(3)) == pytest.approx(10, abs=1e-10)
    for theta in (0.5, 45.0, 120.0, 179.0):
        R = random_rotation(rng)
        assert rotation_error(R, R @ rotation_about(rng.normal(size=3), np.radians(theta))) == \
            pytest.approx(theta, abs=1e-6)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2 ** 32 - 1))
def test_rotation_error_symmetric(seed):
    rng = np.random.default_rng(seed)
    A, B = random_rotation(rng), random_rotation(rng)
    assert abs(rotation_error(A, B) - rotation_error(B, A)) < 1e-10


def test_translation_error_examples():
    e1, e2 = np.eye(3)[0], np.eye(3)[1]
    assert translation_error(e1, e1) == 0.0
    assert translation_error(e1, e2) == pytest.approx(90.0, abs=1e-10)
    assert translation_error(e1, -e1) == pytest.approx(180.0, abs=1e-10)
    with pytest.raises(ZeroVector):
        translation_error(np.zeros(3), e1)


def test_pose_auc_examples():
    assert pose_auc([0, 0, 0]) == [1.0, 1.0, 1.0]
    assert pose_auc([np.inf, np.inf]) == [0.0, 0.0, 0.0]
    assert pose_auc([0, 5, 20], thresholds=(10.0,)) == [0.5]
    with pytest.raises(EmptyInput):
        pose_auc([])


@settings(max_examples=200, deadline=None)
@given(st.lists(st.one_of(st.floats(0, 100), st.just(np.inf)), min_size=1, max_size=30))
def test_pose_auc_monotone(errors):
    a5, a10, a20 = pose_auc(errors)
    assert 0.0 <= a5 <= a10 <= a20 <= 1.0


def test_pose_auc_matches_integral():
    # independent oracle: numeric integral of the recall curve
    errs = np.array([0.3, 2.0, 7.5, 12.0, np.inf])
    ts = np.linspace(0, 10, 200001)
    recall = (errs[None, :] <= ts[:, None]).mean(axis=1)
    integral = np.sum(0.5 * (recall[1:] + recall[:-1]) * np.diff(ts)) / 10
    assert pose_auc(errs, thresholds=(10.0,))[0] == pytest.approx(integral, abs=1e-4)


def test_distortion_error_examples():
    m = FundamentalModel(np.eye(3), -0.9, -0.9)
    assert distortion_error(m, -0.9, -0.9) == 0.0
    assert distortion_error(FundamentalModel(np.eye(3), -0.6, -0.6), -0.9, -0.9) == pytest.approx(0.3)
    assert distortion_error(FundamentalModel(np.eye(3), -0.2, -1.0), -0.3, -0.8) == pytest.approx(0.15, abs=1e-15)


def test_aggregate_examples():
    r = PoseErrorReport(1.0, 2.0, 2.0, 0.1)
    agg = aggregate([r])
    assert agg["pose_err"]["avg"] == agg["pose_err"]["median"] == 2.0
    reps = [PoseErrorReport(e, 0.0, e, 0.0) for e in (1.0, 3.0, 100.0)]
    agg = aggregate(reps)
    assert agg["pose_err"]["median"] == 3.0
    assert agg["pose_err"]["avg"] == pytest.approx(34.6667, abs=1e-4)
    even = aggregate([PoseErrorReport(e, e, e, 0) for e in (1.0, 2.0, 4.0, 10.0)])
    assert even["pose_err"]["median"] == 3.0
    same = aggregate([r, r, r])
    assert same["rot_err"]["avg"] == same["rot_err"]["median"]
    with pytest.raises(EmptyInput):
        aggregate([])


def test_evaluate_ground_truth_model():
    for seed in range(20):
        p = make_pair(-0.7, -1.1, n=40, seed=seed)
        rep = evaluate_model(gt_model(p), p.x1, p.x2, p.k1, p.k2, p.gt_pose, -0.7, -1.1)
        assert rep.pose_err < 1e-6 and rep.lambda_err == 0.0
        assert rep.pose_err == max(rep.rot_err, rep.trans_err)


def test_evaluate_failure_is_inf():
    p = make_pair(-0.5, n=20, seed=1)
    rep = evaluate_model(gt_model(p), p.x1[:0], p.x2[:0], p.k1, p.k2, p.gt_pose, -0.5, -0.5)
    assert rep.pose_err == np.inf and rep.lambda_err == 0.0


def test_recover_pose_rate_over_1000_scenes():
    from radialpose.synth import SceneConfig, generate_pair
    cfg = SceneConfig(n_points=20, noise_sigma_px=0.0)
    good = 0
    for seed in range(1000):
        p = generate_pair(cfg, seed=seed)
        pose = recover_pose(essential_from_pose(p.gt_pose), p.k1.calibrate(p.x1), p.k2.calibrate(p.x2))
        good += max(rotation_error(pose.r, p.gt_pose.r), translation_error(pose.t, p.gt_pose.t)) < 1e-4
    assert good / 1000 >= 0.999


def test_full_pipeline_identity():
    from radialpose.ransac import RansacConfig, SampleGrid, run_ransac
    for seed, lam in enumerate((0.0, -0.6, -1.2)):
        p = make_pair(lam, n=80, seed=seed)
        est = run_ransac(p.x1, p.x2, SampleGrid((lam,)), RansacConfig(max_iterations=200, seed=seed))
        rep = evaluate_model(est.model, p.x1, p.x2, p.k1, p.k2, p.gt_pose, lam, lam)
        assert rep.pose_err < 1e-3
