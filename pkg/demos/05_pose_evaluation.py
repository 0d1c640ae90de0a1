"""
From a fundamental model to pose errors
=======================================

With known intrinsics the estimate is turned into an essential matrix,
decomposed, and disambiguated by cheirality.  Rotation and translation
errors are angles in degrees; AUC integrates the recall curve.
"""
from radialpose import (RansacConfig, SampleGrid, SceneConfig, generate_pair, pose_auc,
                        run_ransac)
from radialpose.evaluation import aggregate, evaluate_model

reports = []
for seed in range(10):
    pair = generate_pair(SceneConfig(lambda_mode="scenario_c", outlier_fraction=0.2), seed=seed)
    est = run_ransac(pair.x1, pair.x2, SampleGrid((0.0, -0.6, -1.2)), RansacConfig(seed=seed))
    m = est.inlier_mask
    rep = evaluate_model(est.model, pair.x1[m], pair.x2[m], pair.k1, pair.k2, pair.gt_pose,
                         pair.gt_lambda1, pair.gt_lambda2)
    reports.append(rep)
    print(f"pair {seed}: true lambda {pair.gt_lambda1:+.2f}  rot {rep.rot_err:.3f}  "
          f"trans {rep.trans_err:.3f}  eps {rep.lambda_err:.3f}")

agg = aggregate(reports)
print("median pose error:", round(agg["pose_err"]["median"], 4))
print("AUC@5/10/20:", agg["auc"])
print("AUC of {0, 5, 20} at 10 degrees:", pose_auc([0, 5, 20], thresholds=(10,)))
