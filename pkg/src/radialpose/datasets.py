"""Line-delimited JSON datasets and JSON config parsing."""
import json
import math
from importlib import resources
from dataclasses import fields, replace

import numpy as np

from .errors import ConfigError, ParseError
from .evaluation import CameraIntrinsics, RelativePose
from .ransac import RansacConfig, SampleGrid
from .synth import SCENARIOS, GroundTruthPair, SceneConfig

TRACKS = {"pinhole7pt": "pinhole", "equal9pt": "equal", "two12pt": "two"}


def pair_to_dict(pair):
    return {
        "pair_id": int(pair.pair_id),
        "k1": pair.k1.k.tolist(),
        "k2": pair.k2.k.tolist(),
        "r": pair.gt_pose.r.tolist(),
        "t": pair.gt_pose.t.tolist(),
        "lambda1": float(pair.gt_lambda1),
        "lambda2": float(pair.gt_lambda2),
        "corrs": np.hstack([pair.x1, pair.x2]).tolist(),
        "inlier_truth": [bool(v) for v in pair.inlier_truth],
    }


def pair_from_dict(d):
    try:
        corrs = np.asarray(d["corrs"], dtype=float).reshape(-1, 4)
        t = np.asarray(d["t"], dtype=float)
        pose = RelativePose(np.asarray(d["r"], dtype=float), t)
        # keep the stored translation bit-exact (RelativePose renormalizes)
        object.__setattr__(pose, "t", t)
        return GroundTruthPair(
            pair_id=int(d["pair_id"]),
            x1=corrs[:, :2].copy(),
            x2=corrs[:, 2:].copy(),
            gt_pose=pose,
            gt_lambda1=float(d["lambda1"]),
            gt_lambda2=float(d["lambda2"]),
            inlier_truth=np.asarray(d["inlier_truth"], dtype=bool),
            k1=CameraIntrinsics(np.asarray(d["k1"], dtype=float)),
            k2=CameraIntrinsics(np.asarray(d["k2"], dtype=float)),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"malformed pair record: {exc}") from exc


def dumps_pair(pair):
    # json writes floats with repr, which round-trips bit-exactly
    return json.dumps(pair_to_dict(pair), separators=(",", ":"))


def write_dataset(path, pairs):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for pair in pairs:
            fh.write(dumps_pair(pair) + "\n")


def read_dataset(path):
    pairs = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            if not line.strip():
                continue
            try:
                d = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ParseError(f"{path}:{lineno}: {exc}") from exc
            pairs.append(pair_from_dict(d))
    return pairs


def load_json(path):
    with open(path, encoding="utf-8") as fh:
        try:
            return json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}: {exc}") from exc


def _known(cls, d, where):
    names = {f.name for f in fields(cls)}
    unknown = set(d) - names
    if unknown:
        raise ConfigError(f"{where}: unknown field(s) {sorted(unknown)}")


def scene_from_dict(d, seed=0):
    """SceneConfig from a JSON object; ``lambda_mode`` may be a scenario name or ``{"fixed": [l1, l2]}``."""
    if not isinstance(d, dict):
        raise ConfigError("scene: expected an object")
    d = dict(d)
    mode = d.pop("lambda_mode", "fixed")
    if isinstance(mode, dict):
        if set(mode) != {"fixed"}:
            raise ConfigError("lambda_mode: expected {\"fixed\": [l1, l2]}")
        d["fixed_lambdas"] = mode["fixed"]
        mode = "fixed"
    elif mode not in ("fixed",) + SCENARIOS:
        raise ConfigError(f"lambda_mode: unknown mode {mode!r}")
    d["lambda_mode"] = mode
    _known(SceneConfig, d, "scene")
    for key in ("depth_range", "fixed_lambdas"):
        if key in d:
            try:
                a, b = d[key]
                d[key] = (float(a), float(b))
            except (TypeError, ValueError) as exc:
                raise ConfigError(f"{key}: expected two numbers") from exc
    d.setdefault("seed", seed)
    try:
        return SceneConfig(**d)
    except TypeError as exc:
        raise ConfigError(f"scene: {exc}") from exc


def parse_synth_config(d):
    if not isinstance(d, dict):
        raise ConfigError("config: expected an object")
    _require(d, "n_pairs", int)
    seed = d.get("seed", 0)
    if not isinstance(seed, int) or d["n_pairs"] < 1:
        raise ConfigError("n_pairs/seed: expected a positive count and an integer seed")
    unknown = set(d) - {"n_pairs", "seed", "scene"}
    if unknown:
        raise ConfigError(f"config: unknown field(s) {sorted(unknown)}")
    return d["n_pairs"], seed, scene_from_dict(d.get("scene", {}), seed)


def _require(d, key, typ):
    if key not in d:
        raise ConfigError(f"{key}: missing")
    if not isinstance(d[key], typ) or isinstance(d[key], bool):
        raise ConfigError(f"{key}: expected {typ.__name__}")


class MethodSpec:
    """A named robust-estimation configuration: grid, LO flag and LO solver track."""

    def __init__(self, name, track, grid, lo):
        if track not in TRACKS:
            raise ParseError(f"track: unknown {track!r}, expected one of {sorted(TRACKS)}")
        if track == "equal9pt" and not grid.shared:
            raise ParseError(f"{name}: equal9pt needs a shared grid")
        self.name = name
        self.track = track
        self.grid = grid
        self.lo = bool(lo)

    def ransac_config(self, base):
        """Copy of ``base`` with this method's LO settings."""
        return replace(base, lo_enabled=self.lo, lo_solver=TRACKS[self.track])

    def to_dict(self):
        g = {"u1": list(self.grid.u1), "shared": self.grid.shared}
        if not self.grid.shared:
            g["u2"] = list(self.grid.u2)
        return {"name": self.name, "track": self.track, "grid": g, "lo": self.lo}

    def __repr__(self):
        return f"MethodSpec({self.name!r})"


def method_from_dict(d):
    try:
        g = d["grid"]
        grid = SampleGrid(tuple(g["u1"]), tuple(g["u2"]) if "u2" in g else None,
                          bool(g.get("shared", True)))
        return MethodSpec(str(d["name"]), d["track"], grid, d.get("lo", True))
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"malformed method: {exc}") from exc


def parse_methods(obj):
    if not isinstance(obj, list) or not obj:
        raise ParseError("methods: expected a nonempty JSON array")
    methods = [method_from_dict(d) for d in obj]
    names = [m.name for m in methods]
    if len(set(names)) != len(names):
        raise ParseError("methods: names must be unique")
    return methods


def default_methods():
    """The shipped method table: four grids, with and without LO, equal and different tracks."""
    text = resources.files("radialpose").joinpath("data/default_methods.json").read_text("utf-8")
    return parse_methods(json.loads(text))


def ransac_from_dict(d, base=None):
    base = base or RansacConfig()
    if not isinstance(d, dict):
        raise ConfigError("ransac: expected an object")
    _known(RansacConfig, d, "ransac")
    try:
        return replace(base, **d)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"ransac: {exc}") from exc


def fmt_float(v):
    """CSV/JSON number formatting: shortest round-trip repr, non-finite as ``inf``."""
    v = float(v)
    if math.isnan(v) or math.isinf(v):
        return "inf"
    return repr(v)
