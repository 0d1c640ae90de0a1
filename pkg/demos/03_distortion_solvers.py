"""
Estimating distortion with polynomial eigenvalue solvers
========================================================

With equal distortion in both images, nine correspondences give a quadratic
eigenvalue problem reduced to a 6x6 matrix.  With different distortions,
twelve correspondences give a 4x4 eigenvalue problem.
"""
from radialpose import SceneConfig, generate_pair, solve_equal_9pt, solve_two_12pt

pair = generate_pair(SceneConfig(n_points=20, noise_sigma_px=0.0, fixed_lambdas=(-0.7, -0.7)), seed=1)
for F, lam in solve_equal_9pt(pair.x1[:9], pair.x2[:9]):
    print(f"9pt candidate lambda = {lam:+.6f}")

cfg = SceneConfig(n_points=20, noise_sigma_px=0.0, fixed_lambdas=(-0.3, -1.1), equal_lambdas=False)
pair = generate_pair(cfg, seed=2)
for F, l1, l2 in solve_two_12pt(pair.x1[:12], pair.x2[:12]):
    print(f"12pt candidate lambdas = ({l1:+.6f}, {l2:+.6f})")

# spurious roots of the linearized problem can be dropped by checking the
# structure of the lifted vector
kept = solve_two_12pt(pair.x1[:12], pair.x2[:12], consistency_tol=1e-6)
print("consistent candidates:", [(round(a, 6), round(b, 6)) for _, a, b in kept])
