"""Small dense linear algebra used by the solvers, backed by numpy/scipy."""
import math

import numpy as np
import scipy.linalg

from .errors import AllZeroCoefficients, ConvergenceFailure, RankDeficient

IMAG_TOL = 1e-6
RANK_TOL = 1e-10


def svd(m, full=True):
    """SVD returning ``(U, S, V)`` with ``m = U @ diag(S) @ V.T``.

    ``full=False`` gives the thin decomposition; V is still square when
    ``m`` has at least as many rows as columns.
    """
    m = np.asarray(m, dtype=float)
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix has non-finite entries")
    try:
        U, S, Vt = np.linalg.svd(m, full_matrices=full)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceFailure(str(exc)) from exc
    return U, S, Vt.T


def real_eigenvalues(m, imag_tol=IMAG_TOL):
    """Eigenvalues of a small square matrix whose imaginary part is negligible."""
    m = np.asarray(m, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError("matrix must be square")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix has non-finite entries")
    try:
        ev = np.linalg.eigvals(m)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceFailure(str(exc)) from exc
    keep = np.abs(ev.imag) <= imag_tol * (1.0 + np.abs(ev.real))
    return np.sort(ev.real[keep])


def solve_least_squares(a, b, rank_tol=RANK_TOL):
    """Least-squares solution of ``a x = b`` via column-pivoted QR.

    Raises RankDeficient instead of falling back to a minimum-norm solution,
    so callers can reject degenerate samples.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    vec = b.ndim == 1
    if vec:
        b = b[:, None]
    m, n = a.shape
    if m < n:
        raise RankDeficient(f"underdetermined system ({m} x {n})")
    Q, R, piv = scipy.linalg.qr(a, mode="economic", pivoting=True)
    d = np.abs(np.diag(R))
    if d[0] == 0.0 or d[-1] <= rank_tol * d[0]:
        raise RankDeficient("coefficient matrix is numerically rank deficient")
    y = scipy.linalg.solve_triangular(R, Q.T @ b)
    x = np.empty_like(y)
    x[piv] = y
    return x[:, 0] if vec else x


def _horner(coeffs, r):
    p, d = 0.0, 0.0
    for c in coeffs:
        d = d * r + p
        p = p * r + c
    return p, d


def _polish(coeffs, r, steps=2):
    # Newton steps, kept only while they shrink |p(r)| (multiple roots stall)
    p, d = _horner(coeffs, r)
    for _ in range(steps):
        if d == 0.0:
            break
        r_new = r - p / d
        p_new, d_new = _horner(coeffs, r_new)
        if abs(p_new) >= abs(p):
            break
        r, p, d = r_new, p_new, d_new
    return r


def _monic_cubic_roots(a, b, c):
    # x^3 + a x^2 + b x + c via the depressed cubic t^3 + p t + q
    p = b - a * a / 3.0
    q = 2.0 * a ** 3 / 27.0 - a * b / 3.0 + c
    shift = -a / 3.0
    disc = (q / 2.0) ** 2 + (p / 3.0) ** 3
    # near-zero discriminant means a double root; take the trigonometric branch
    if disc > 1e-14 * ((q / 2.0) ** 2 + abs(p / 3.0) ** 3):
        sd = math.sqrt(disc)
        return [math.copysign(abs(-q / 2.0 + sd) ** (1 / 3), -q / 2.0 + sd)
                + math.copysign(abs(-q / 2.0 - sd) ** (1 / 3), -q / 2.0 - sd) + shift]
    if p >= 0.0:
        # disc ~ 0 with p >= 0 forces p ~ q ~ 0: a triple root
        return [shift]
    m = 2.0 * math.sqrt(-p / 3.0)
    arg = max(-1.0, min(1.0, 3.0 * q / (p * m)))
    theta = math.acos(arg) / 3.0
    return [m * math.cos(theta - 2.0 * math.pi * k / 3.0) + shift for k in range(3)]


def cubic_real_roots(c3, c2, c1, c0):
    """Real roots of ``c3 x^3 + c2 x^2 + c1 x + c0``.

    A negligible leading coefficient drops the degree (quadratic or linear).
    """
    coeffs = [float(c3), float(c2), float(c1), float(c0)]
    scale = max(abs(c) for c in coeffs)
    if scale == 0.0:
        raise AllZeroCoefficients("all polynomial coefficients are zero")
    coeffs = [c / scale for c in coeffs]
    while abs(coeffs[0]) < 1e-12:
        coeffs = coeffs[1:]
    if len(coeffs) == 1:
        return np.empty(0)
    if len(coeffs) == 2:
        roots = [-coeffs[1] / coeffs[0]]
    elif len(coeffs) == 3:
        a, b, c = coeffs
        disc = b * b - 4.0 * a * c
        if disc < 0.0:
            return np.empty(0)
        # numerically stable pair
        qq = -0.5 * (b + math.copysign(math.sqrt(disc), b))
        roots = [qq / a, c / qq] if qq != 0.0 else [0.0, 0.0]
    else:
        a0 = coeffs[0]
        try:
            roots = _monic_cubic_roots(coeffs[1] / a0, coeffs[2] / a0, coeffs[3] / a0)
        except (OverflowError, ValueError, ZeroDivisionError):
            roots = []
    roots = [_polish(coeffs, r) for r in roots]
    if not roots or not all(_root_ok(coeffs, r) for r in roots):
        # badly scaled input defeats the closed form; use the balanced companion matrix
        ev = np.roots(coeffs)
        keep = np.abs(ev.imag) <= IMAG_TOL * (1.0 + np.abs(ev.real))
        roots = [_polish(coeffs, r) for r in ev.real[keep]]
    return np.sort(np.array(roots))


def _root_ok(coeffs, r):
    return math.isfinite(r) and abs(_horner(coeffs, r)[0]) <= 1e-9 * (1.0 + abs(r)) ** 3
