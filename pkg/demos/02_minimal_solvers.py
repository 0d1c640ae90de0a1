"""
Pinhole fundamental matrix solvers
==================================

The 7-point solver returns up to three rank-2 candidates; the linear solver
takes eight or more correspondences.  Both work on undistorted points.
"""
import numpy as np

from radialpose import SceneConfig, generate_pair, solve_7pt, solve_8pt_linear
from radialpose.evaluation import fundamental_from_pose

pair = generate_pair(SceneConfig(n_points=50, noise_sigma_px=0.0), seed=3)
F_true = fundamental_from_pose(pair.gt_pose, pair.k1, pair.k2)


def dist(A, B):
    return min(np.linalg.norm(A - B), np.linalg.norm(A + B))


cands = solve_7pt(pair.x1[:7], pair.x2[:7])
print(f"7pt: {len(cands)} candidate(s)")
for F in cands:
    print(f"  det {np.linalg.det(F):+.1e}  distance to truth {dist(F, F_true):.1e}")

F8 = solve_8pt_linear(pair.x1, pair.x2)
print(f"linear on {len(pair.x1)} points: distance to truth {dist(F8, F_true):.1e}")
