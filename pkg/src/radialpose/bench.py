"""Benchmark orchestration: run methods over datasets and aggregate the errors."""
import csv
import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace

import numpy as np
from scipy.stats import spearmanr

from .errors import NoModelFound
from .evaluation import PoseErrorReport, aggregate, evaluate_model
from .datasets import fmt_float
from .ransac import run_ransac
from .synth import generate_pair, mix_seed, sweep_levels

CSV_COLUMNS = (
    "pair_id", "method", "rot_err", "trans_err", "pose_err", "lambda_err",
    "lambda1_est", "lambda2_est", "inliers", "inlier_recall", "iterations",
    "solver_invocations", "wall_time_s",
)
TIMING_COLUMNS = ("wall_time_s",)

SWEEP_COLUMNS = (
    "level", "method", "n_pairs",
    "lambda_q1", "lambda_median", "lambda_q3", "lambda_mean",
    "pose_q1", "pose_median", "pose_q3", "pose_mean",
    "lambda_err_median",
)


@dataclass(frozen=True)
class BenchRecord:
    pair_id: int
    method: str
    report: PoseErrorReport
    lambda1_est: float
    lambda2_est: float
    inliers: int
    inlier_recall: float
    iterations: int
    solver_invocations: int
    wall_time_s: float

    def row(self):
        r = self.report
        return [str(self.pair_id), self.method, fmt_float(r.rot_err), fmt_float(r.trans_err),
                fmt_float(r.pose_err), fmt_float(r.lambda_err), fmt_float(self.lambda1_est),
                fmt_float(self.lambda2_est), str(self.inliers), fmt_float(self.inlier_recall),
                str(self.iterations), str(self.solver_invocations), fmt_float(self.wall_time_s)]


def run_method(pair, method, base_cfg):
    """Estimate one pair with one method and evaluate against ground truth."""
    cfg = replace(method.ransac_config(base_cfg), seed=mix_seed(base_cfg.seed, pair.pair_id))
    try:
        est = run_ransac(pair.x1, pair.x2, method.grid, cfg)
    except NoModelFound:
        return BenchRecord(pair.pair_id, method.name, PoseErrorReport.failed(), np.inf, np.inf,
                           0, 0.0, 0, 0, 0.0)
    inl = est.inlier_mask
    report = evaluate_model(est.model, pair.x1[inl], pair.x2[inl], pair.k1, pair.k2,
                            pair.gt_pose, pair.gt_lambda1, pair.gt_lambda2)
    truth = pair.inlier_truth
    recall = float((inl & truth).sum() / max(1, truth.sum()))
    return BenchRecord(pair.pair_id, method.name, report, est.model.lambda1, est.model.lambda2,
                       est.num_inliers, recall, est.iterations_used, est.solver_invocations,
                       est.elapsed)


def _run_pair(args):
    pair, methods, base_cfg = args
    return [run_method(pair, m, base_cfg) for m in methods]


def run_benchmark(pairs, methods, base_cfg, jobs=1):
    """All methods on all pairs; records sorted by ``(pair_id, method)``."""
    tasks = [(p, methods, base_cfg) for p in pairs]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            chunks = list(ex.map(_run_pair, tasks))
    else:
        chunks = [_run_pair(t) for t in tasks]
    records = [r for chunk in chunks for r in chunk]
    records.sort(key=lambda r: (r.pair_id, r.method))
    return records


def write_records_csv(path, records):
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        for rec in records:
            w.writerow(rec.row())


def _jsonable(v):
    if isinstance(v, dict):
        return {k: _jsonable(x) for k, x in v.items()}
    if isinstance(v, float) and not np.isfinite(v):
        return "inf"
    return v


def summarize(records):
    """Per-method aggregate: AVG/MED pose and distortion errors, AUC triple, timing."""
    by_method = {}
    for rec in records:
        by_method.setdefault(rec.method, []).append(rec)
    out = {}
    for name, recs in by_method.items():
        agg = aggregate([r.report for r in recs])
        times = np.array([r.wall_time_s for r in recs])
        out[name] = {
            "n_pairs": len(recs),
            "pose_err": agg["pose_err"],
            "rot_err": agg["rot_err"],
            "trans_err": agg["trans_err"],
            "lambda_err": agg["lambda_err"],
            "auc": agg["auc"],
            "time_ms": {"avg": float(1000.0 * times.mean()), "median": float(1000.0 * np.median(times))},
        }
    return _jsonable(out)


def write_summary_json(path, summary):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(summary, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _quantile(v, q):
    # linear interpolation that tolerates inf entries (failed estimates)
    v = np.sort(np.asarray(v, dtype=float))
    pos = q * (v.size - 1)
    lo, hi = int(np.floor(pos)), int(np.ceil(pos))
    frac = pos - lo
    if frac == 0.0 or v[lo] == v[hi]:
        return float(v[lo])
    return float(v[lo] + frac * (v[hi] - v[lo]))


def _sweep_level_pairs(scene, level, n_pairs, seed):
    cfg = replace(scene, lambda_mode="fixed", fixed_lambdas=(level, level), equal_lambdas=True)
    # same seeds for every level: only the distortion changes between levels
    return [generate_pair(cfg, pair_id=i, seed=mix_seed(seed, i)) for i in range(n_pairs)]


def run_sweep(scene, methods, base_cfg, pairs_per_level, seed, levels=None, jobs=1):
    """Robustness sweep over distortion levels; one summary row per (level, method)."""
    rows = []
    for level in (sweep_levels() if levels is None else levels):
        pairs = _sweep_level_pairs(scene, level, pairs_per_level, seed)
        records = run_benchmark(pairs, methods, base_cfg, jobs=jobs)
        for m in methods:
            recs = [r for r in records if r.method == m.name]
            lam = np.array([r.lambda1_est for r in recs])
            pose = np.array([r.report.pose_err for r in recs])
            lerr = np.array([r.report.lambda_err for r in recs])
            rows.append({
                "level": level, "method": m.name, "n_pairs": len(recs),
                "lambda_q1": _quantile(lam, 0.25), "lambda_median": _quantile(lam, 0.5),
                "lambda_q3": _quantile(lam, 0.75), "lambda_mean": float(lam.mean()),
                "pose_q1": _quantile(pose, 0.25), "pose_median": _quantile(pose, 0.5),
                "pose_q3": _quantile(pose, 0.75), "pose_mean": float(pose.mean()),
                "lambda_err_median": _quantile(lerr, 0.5),
            })
    return rows


def write_sweep_csv(path, rows):
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(SWEEP_COLUMNS)
        for row in rows:
            w.writerow([fmt_float(row[c]) if isinstance(row[c], (float, np.floating)) else str(row[c])
                        for c in SWEEP_COLUMNS])


def sweep_trend(rows, method):
    """Spearman correlation between distortion level and median distortion error."""
    sel = [r for r in rows if r["method"] == method]
    levels = [r["level"] for r in sel]
    errs = [r["lambda_err_median"] for r in sel]
    return float(spearmanr(levels, errs)[0])
