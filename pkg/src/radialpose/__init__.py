"""Two-view relative pose with radial distortion: undistortion-coefficient
sampling around the 7-point solver, and polynomial-eigenvalue distortion
solvers for local optimization."""
from .distortion_solvers import solve_equal_9pt, solve_two_12pt
from .evaluation import (CameraIntrinsics, PoseErrorReport, RelativePose, distortion_error,
                         essential_from_fundamental, pose_auc, recover_pose, rotation_error,
                         translation_error)
from .geometry import (FundamentalModel, distort, epipolar_residual_algebraic, normalize_f,
                       normalize_point, sampson_residual_distorted, undistort)
from .minimal import enforce_rank2, solve_7pt, solve_8pt_linear
from .ransac import Estimate, RansacConfig, SampleGrid, run_ransac, score_model
from .synth import SceneConfig, generate_pair, sample_lambda, sweep_levels

__version__ = "0.1.0"
