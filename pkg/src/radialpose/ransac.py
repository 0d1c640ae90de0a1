"""RANSAC over a fixed grid of undistortion coefficients.

Every iteration draws one 7-point sample, undistorts it with each coefficient
pair of the grid and runs the pinhole 7-point solver on it.  Hypotheses are
scored with a truncated quadratic loss on the distortion-aware Sampson
residual.  Each new best model is locally optimized with a non-minimal solver
that also re-estimates the distortion (9-point equal or 12-point different).
"""
import math
import time
from dataclasses import dataclass, replace
from itertools import product
from typing import Optional, Tuple

import numpy as np

from .distortion_solvers import solve_equal_9pt, solve_two_12pt
from .errors import DegeneratePoint, DegenerateSample, InsufficientCorrespondences, NoModelFound
from .geometry import (FundamentalModel, PLAUSIBLE_LAMBDA, W_EPS, in_plausible_range, lift,
                       sampson_lifted, sampson_residual_distorted, undistort)
from .minimal import solve_7pt, solve_8pt_linear

SAMPLE_SIZE = 7
LO_MARGIN = 3
LO_MIN_POINTS = {"equal": 9, "two": 12, "pinhole": 8}


@dataclass(frozen=True)
class SampleGrid:
    """Undistortion coefficients tried in every iteration.

    With ``shared=True`` only the pairs ``(l, l)`` for ``l`` in ``u1`` are
    used (equal-distortion prior); otherwise the full product ``u1 x u2``.
    """

    u1: Tuple[float, ...]
    u2: Optional[Tuple[float, ...]] = None
    shared: bool = True

    def __post_init__(self):
        u1 = tuple(float(v) for v in self.u1)
        u2 = u1 if self.u2 is None else tuple(float(v) for v in self.u2)
        if not u1 or not u2:
            raise ValueError("sample grid lists must be nonempty")
        for v in u1 + u2:
            if not in_plausible_range(v):
                raise ValueError(f"grid value {v} outside {PLAUSIBLE_LAMBDA}")
        if self.shared and u2 != u1:
            raise ValueError("a shared grid uses the same values for both cameras")
        object.__setattr__(self, "u1", u1)
        object.__setattr__(self, "u2", u2)

    def pairs(self):
        if self.shared:
            return [(v, v) for v in self.u1]
        return list(product(self.u1, self.u2))


@dataclass(frozen=True)
class RansacConfig:
    threshold_px: float = 3.0
    nominal_longer_side: float = 1000.0
    confidence: float = 0.9999
    max_iterations: int = 10000
    min_iterations: int = 100
    lo_enabled: bool = True
    lo_rounds: int = 3
    # "equal", "two" or "pinhole"; None picks from the grid kind
    lo_solver: Optional[str] = None
    seed: int = 0

    def __post_init__(self):
        if self.threshold_px <= 0:
            raise ValueError("threshold_px must be positive")
        if not 0.0 < self.confidence < 1.0:
            raise ValueError("confidence must be in (0, 1)")
        if self.min_iterations < 0 or self.max_iterations < max(1, self.min_iterations):
            raise ValueError("need 0 <= min_iterations <= max_iterations, max_iterations >= 1")
        if self.lo_solver not in (None, "equal", "two", "pinhole"):
            raise ValueError(f"unknown lo_solver {self.lo_solver!r}")

    @property
    def threshold(self):
        """Inlier threshold in normalized coordinates."""
        return self.threshold_px / self.nominal_longer_side


@dataclass(frozen=True, eq=False)
class Estimate:
    model: FundamentalModel
    inlier_mask: np.ndarray
    score: float
    iterations_used: int = 0
    solver_invocations: int = 0
    elapsed: float = 0.0
    draws: int = 0

    @property
    def num_inliers(self):
        return int(self.inlier_mask.sum())


def _truncated(r, tau):
    loss = np.minimum(r * r, tau * tau)
    return float(np.sum(loss)), r < tau


def score_model(model, x1, x2, tau):
    """Truncated quadratic score (lower is better) and inlier mask ``r < tau``."""
    if tau <= 0:
        raise ValueError("threshold must be positive")
    return _truncated(np.atleast_1d(sampson_residual_distorted(model, x1, x2)), tau)


def draw_sample(n, k, rng):
    """``k`` distinct indices drawn uniformly from ``range(n)``."""
    if n < k:
        raise InsufficientCorrespondences(f"need {k} correspondences, got {n}")
    return rng.choice(n, size=k, replace=False)


def iteration_bound(inlier_ratio, confidence, m=SAMPLE_SIZE):
    """Standard RANSAC bound ``log(1 - eta) / log(1 - w^m)`` (unclamped)."""
    p = inlier_ratio ** m
    if p <= 0.0:
        return math.inf
    if p >= 1.0:
        return 0
    return math.ceil(math.log(1.0 - confidence) / math.log(1.0 - p))


def _lo_candidates(kind, model, x1, x2):
    if kind == "equal":
        return [FundamentalModel(F, lam, lam) for F, lam in solve_equal_9pt(x1, x2)]
    if kind == "two":
        return [FundamentalModel(F, l1, l2) for F, l1, l2 in solve_two_12pt(x1, x2)]
    u1 = undistort(x1, model.lambda1)
    u2 = undistort(x2, model.lambda2)
    return [FundamentalModel(solve_8pt_linear(u1, u2), model.lambda1, model.lambda2)]


def local_optimize(best, x1, x2, kind, cfg):
    """Refit the model on its inliers with a non-minimal solver.

    Up to ``cfg.lo_rounds`` rounds; a candidate is adopted only if it lowers
    the score, so the returned estimate is never worse than ``best``.
    """
    tau = cfg.threshold
    current = best
    need = LO_MIN_POINTS[kind] + LO_MARGIN
    for _ in range(cfg.lo_rounds):
        inl = current.inlier_mask
        if inl.sum() < need:
            break
        try:
            candidates = _lo_candidates(kind, current.model, x1[inl], x2[inl])
        except (DegenerateSample, DegeneratePoint):
            break
        improved = None
        for model in candidates:
            if not model.plausible:
                continue
            score, mask = score_model(model, x1, x2, tau)
            if score < current.score and (improved is None or score < improved[1]):
                improved = (model, score, mask)
        if improved is None:
            break
        current = replace(current, model=improved[0], score=improved[1], inlier_mask=improved[2])
    return current


def _undistorted_table(x, values):
    # per coefficient: undistorted points, validity, and the lifted form for scoring
    table = {}
    for lam in set(values):
        h, j = lift(x, lam)
        ok = np.abs(h[:, 2]) > W_EPS
        table[lam] = (h[:, :2] / np.where(ok, h[:, 2], 1.0)[:, None], ok, h, j)
    return table


def run_ransac(x1, x2, grid, cfg):
    """Robustly estimate a fundamental model with undistortion coefficients.

    ``x1``/``x2`` are ``(N, 2)`` distorted, normalized points.  The result
    is a deterministic function of the input order, the grid and ``cfg.seed``.
    """
    t0 = time.perf_counter()
    x1 = np.asarray(x1, dtype=float)
    x2 = np.asarray(x2, dtype=float)
    n = x1.shape[0]
    if n < SAMPLE_SIZE or x2.shape[0] != n:
        raise InsufficientCorrespondences(f"need at least {SAMPLE_SIZE} correspondences, got {n}")
    tau = cfg.threshold
    kind = cfg.lo_solver or ("equal" if grid.shared else "two")
    pairs = grid.pairs()
    und1 = _undistorted_table(x1, grid.u1)
    und2 = _undistorted_table(x2, grid.u2)
    rng = np.random.default_rng(cfg.seed)

    best = None
    iters = draws = calls = 0
    bound = cfg.max_iterations
    while iters < bound and draws < 10 * cfg.max_iterations:
        draws += 1
        idx = draw_sample(n, SAMPLE_SIZE, rng)
        produced = False
        for l1, l2 in pairs:
            p1, ok1, h1, j1 = und1[l1]
            p2, ok2, h2, j2 = und2[l2]
            if not (ok1[idx].all() and ok2[idx].all()):
                continue
            calls += 1
            try:
                Fs = solve_7pt(p1[idx], p2[idx])
            except DegenerateSample:
                continue
            produced = True
            for F in Fs:
                model = FundamentalModel(F, l1, l2)
                if not model.plausible:
                    continue
                score, mask = _truncated(sampson_lifted(model.F, h1, j1, h2, j2), tau)
                if best is not None and score >= best.score:
                    continue
                best = Estimate(model, mask, score)
                if cfg.lo_enabled:
                    best = local_optimize(best, x1, x2, kind, cfg)
                w = best.num_inliers / n
                bound = min(cfg.max_iterations,
                            max(cfg.min_iterations, iteration_bound(w, cfg.confidence)))
        if produced:
            iters += 1
    if best is None:
        raise NoModelFound("no plausible model found")
    if cfg.lo_enabled:
        best = local_optimize(best, x1, x2, kind, cfg)
    return replace(best, iterations_used=iters, solver_invocations=calls, draws=draws,
                   elapsed=time.perf_counter() - t0)
