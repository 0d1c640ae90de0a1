"""
Benchmarks and the distortion sweep
===================================

The ``radialpose`` command writes synthetic datasets, benchmarks method
tables over them, and sweeps the distortion level.  The same functions are
importable; this script drives the command line entry point on a tiny setup.
"""
import csv
import json
import tempfile
from pathlib import Path

from radialpose.cli import main

work = Path(tempfile.mkdtemp())
(work / "synth.json").write_text(json.dumps({
    "n_pairs": 4, "seed": 1,
    "scene": {"n_points": 120, "outlier_fraction": 0.2, "lambda_mode": "scenario_a"},
}))
methods = [
    {"name": "7pt{0}", "track": "equal9pt", "grid": {"u1": [0.0]}, "lo": False},
    {"name": "7pt{0,-0.6,-1.2} +9pt", "track": "equal9pt", "grid": {"u1": [0.0, -0.6, -1.2]}, "lo": True},
]
(work / "methods.json").write_text(json.dumps(methods))

main(["synth", str(work / "synth.json"), str(work / "data.jsonl")])
main(["bench", str(work / "data.jsonl"), str(work / "methods.json"), "--out", str(work / "bench.csv")])
summary = json.loads((work / "bench.summary.json").read_text())
for name, s in summary.items():
    print(f"{name:24s} median pose {s['pose_err']['median']:.3f}  AUC@10 {s['auc']['auc10']:.3f}  "
          f"median eps {s['lambda_err']['median']:.3f}")

(work / "sweep.json").write_text(json.dumps({
    "pairs_per_level": 3, "seed": 0, "levels": [0.0, -0.6, -1.2, -1.8],
    "scene": {"n_points": 120, "outlier_fraction": 0.2}, "methods": methods,
}))
main(["sweep", str(work / "sweep.json"), "--out", str(work / "sweep.csv"), "--max-iters", "1000"])
for row in csv.DictReader(open(work / "sweep.csv")):
    print(f"level {row['level']:>5s}  {row['method']:24s} median lambda {float(row['lambda_median']):+.3f}")
