"""
The division distortion model
=============================

Undistortion maps a distorted point ``x`` to ``x / (1 + lam * |x|^2)``; its
inverse has a closed form.  Barrel distortion (``lam < 0``) pushes points
outward when undistorted.
"""
import numpy as np

from radialpose import distort, normalize_point, undistort

# pixel coordinates are centered and scaled by the longer image side
p = normalize_point([[900.0, 120.0], [200.0, 650.0]], 1280, 720)
print("normalized:", p)

# undistort with a strong barrel coefficient, then map back
lam = -1.2
q = undistort(p, lam)
print("undistorted:", q)
print("round trip error:", np.abs(distort(q, lam) - p).max())

# the undistorted radius follows r / (1 + lam r^2)
r = np.linalg.norm(p, axis=1)
print("radius law holds:", np.allclose(np.linalg.norm(q, axis=1), r / (1 + lam * r * r)))

# one coefficient per point broadcasts as a column
lams = np.array([[0.0], [-0.9]])
print("per-point coefficients:", undistort(p, lams))
