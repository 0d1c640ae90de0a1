"""Command line entry point: ``radialpose synth | bench | sweep``.

Exit codes: 0 success, 2 I/O error, 3 config/parse error, 4 numerical failure.
"""
import argparse
import logging
import sys
from dataclasses import replace
from pathlib import Path

from . import bench
from .datasets import (default_methods, load_json, parse_methods, parse_synth_config,
                       ransac_from_dict, read_dataset, scene_from_dict, write_dataset)
from .errors import ConfigError, ParseError, RadialPoseError
from .ransac import RansacConfig
from .synth import generate_dataset

EXIT_IO, EXIT_CONFIG, EXIT_NUMERIC = 2, 3, 4

log = logging.getLogger("radialpose")


def cmd_synth(config_path, out_path):
    n_pairs, seed, scene = parse_synth_config(load_json(config_path))
    pairs = generate_dataset(scene, n_pairs, seed=seed)
    write_dataset(out_path, pairs)
    return len(pairs)


def _ransac_cfg(args, extra=None):
    cfg = RansacConfig()
    if extra:
        cfg = ransac_from_dict(extra, cfg)
    over = {}
    if args.seed is not None:
        over["seed"] = args.seed
    if args.threshold_px is not None:
        over["threshold_px"] = args.threshold_px
    if args.confidence is not None:
        over["confidence"] = args.confidence
    if args.max_iters is not None:
        over["max_iterations"] = args.max_iters
        over["min_iterations"] = min(cfg.min_iterations, args.max_iters)
    try:
        return replace(cfg, **over)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def summary_path(out_path):
    out_path = Path(out_path)
    return out_path.with_name(out_path.stem + ".summary.json")


def cmd_bench(dataset_path, methods_path, out_path, cfg, jobs=1):
    pairs = read_dataset(dataset_path)
    if methods_path is None:
        methods = default_methods()
    else:
        try:
            methods = parse_methods(load_json(methods_path))
        except ConfigError as exc:
            raise ParseError(str(exc)) from exc
    if not pairs:
        raise ParseError(f"{dataset_path}: no pairs")
    records = bench.run_benchmark(pairs, methods, cfg, jobs=jobs)
    bench.write_records_csv(out_path, records)
    bench.write_summary_json(summary_path(out_path), bench.summarize(records))
    return records


def cmd_sweep(config_path, out_path, args=None, jobs=1):
    conf = load_json(config_path)
    if not isinstance(conf, dict):
        raise ConfigError("config: expected an object")
    unknown = set(conf) - {"pairs_per_level", "seed", "scene", "methods", "ransac", "levels"}
    if unknown:
        raise ConfigError(f"config: unknown field(s) {sorted(unknown)}")
    seed = conf.get("seed", 0)
    n = conf.get("pairs_per_level", 50)
    if not isinstance(n, int) or n < 1:
        raise ConfigError("pairs_per_level: expected a positive integer")
    scene = scene_from_dict(conf.get("scene", {}), seed)
    try:
        methods = parse_methods(conf["methods"]) if "methods" in conf else default_methods()
    except ParseError as exc:
        raise ConfigError(str(exc)) from exc
    cfg = _ransac_cfg(args, conf.get("ransac")) if args is not None else ransac_from_dict(conf.get("ransac", {}))
    rows = bench.run_sweep(scene, methods, cfg, n, seed, levels=conf.get("levels"), jobs=jobs)
    bench.write_sweep_csv(out_path, rows)
    return rows


def build_parser():
    p = argparse.ArgumentParser(prog="radialpose", description="Synthetic datasets, benchmarks and distortion sweeps for radial-distortion relative pose.")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("synth", help="generate a synthetic dataset (JSON lines)")
    s.add_argument("config", help="JSON config: n_pairs, seed, scene")
    s.add_argument("out", help="output dataset path")

    def ransac_flags(q):
        q.add_argument("--seed", type=int, default=None)
        q.add_argument("--threshold-px", type=float, default=None,
                       help="inlier threshold in pixels of the nominal longer side (default 3)")
        q.add_argument("--confidence", type=float, default=None)
        q.add_argument("--max-iters", type=int, default=None)
        q.add_argument("--jobs", type=int, default=1, help="pair-level worker processes")

    b = sub.add_parser("bench", help="run methods over a dataset")
    b.add_argument("dataset")
    b.add_argument("methods", nargs="?", default=None,
                   help="JSON array of methods (default: the built-in method table)")
    b.add_argument("--out", required=True, help="CSV of per-pair records; summary goes next to it")
    ransac_flags(b)

    w = sub.add_parser("sweep", help="distortion robustness sweep")
    w.add_argument("config")
    w.add_argument("--out", required=True)
    ransac_flags(w)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        if args.command == "synth":
            n = cmd_synth(args.config, args.out)
            log.info("wrote %d pairs to %s", n, args.out)
        elif args.command == "bench":
            cfg = _ransac_cfg(args)
            recs = cmd_bench(args.dataset, args.methods, args.out, cfg, jobs=args.jobs)
            log.info("wrote %d records to %s", len(recs), args.out)
        else:
            rows = cmd_sweep(args.config, args.out, args, jobs=args.jobs)
            log.info("wrote %d rows to %s", len(rows), args.out)
    except OSError as exc:
        print(f"radialpose: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (ConfigError, ParseError) as exc:
        print(f"radialpose: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (RadialPoseError, ArithmeticError) as exc:
        print(f"radialpose: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    return 0


if __name__ == "__main__":
    sys.exit(main())
