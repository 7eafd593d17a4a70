"""Scenario sweeps: one axis, several scheme/distribution variants on it."""
from __future__ import annotations

import copy
import hashlib
import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from ..protocol.config import ConfigError, ScenarioConfig, config_from_dict
from ..protocol.runner import aggregate, mean_recovery_curve, run_trials

AXES = ("e_inter", "e_dest", "F", "N", "k")


@dataclass(frozen=True)
class Variant:
    label: str
    scheme: str
    dists: tuple | None = None


@dataclass
class SweepSpec:
    name: str
    raw: dict
    axis: str | None
    values: list
    variants: list[Variant]
    outputs: list[str] = field(default_factory=lambda: ["throughput"])
    base_dir: Path | None = None
    analysis: dict = field(default_factory=dict)

    def points(self) -> list[tuple[object, Variant, ScenarioConfig]]:
        out = []
        for v in (self.values if self.axis else [None]):
            for var in self.variants:
                out.append((v, var, self.config(v, var)))
        return out

    def config(self, value, variant: Variant) -> ScenarioConfig:
        raw = copy.deepcopy({k: v for k, v in self.raw.items()
                             if k not in ("sweep", "name", "description", "analysis")})
        raw["scheme"] = variant.scheme
        if variant.dists is not None:
            raw["dists"] = list(variant.dists)
        elif variant.scheme != self.raw.get("scheme"):
            raw.pop("dists", None)
        if self.axis is not None:
            apply_axis(raw, self.axis, value)
        return config_from_dict(raw, self.base_dir)

    def digest(self) -> str:
        blob = json.dumps(self.raw, sort_keys=True, default=str)
        return hashlib.sha256(blob.encode()).hexdigest()[:16]


def apply_axis(raw: dict, axis: str, value):
    er = raw.setdefault("erasures", {})
    if axis == "e_inter":
        er["inter_user"] = float(value)
    elif axis == "e_dest":
        er["user_to_dest"] = [float(value)] * int(raw["M"])
    elif axis.startswith("e_") and axis[2:].isdigit():
        i = int(axis[2:]) - 1
        dest = list(er.get("user_to_dest", []))
        if not 0 <= i < len(dest):
            raise ConfigError("sweep.axis", f"no user {i + 1}")
        dest[i] = float(value)
        er["user_to_dest"] = dest
    elif axis in ("F", "N", "k"):
        raw[axis] = int(value)
    else:
        raise ConfigError("sweep.axis", f"unsupported axis {axis!r}")


def sweep_from_raw(raw: dict, base_dir: Path | None = None, name: str = "scenario") -> SweepSpec:
    if not isinstance(raw, dict):
        raise ConfigError("config", "top level must be an object")
    sw = raw.get("sweep") or {}
    if not isinstance(sw, dict):
        raise ConfigError("sweep", "must be an object")
    axis = sw.get("axis")
    values = list(sw.get("values", []))
    if axis is not None and not values:
        raise ConfigError("sweep.values", "axis given without values")
    for v in values:
        if axis and (axis == "e_inter" or axis.startswith("e_")):
            if not isinstance(v, (int, float)) or not 0.0 <= v <= 1.0:
                raise ConfigError("sweep.values", f"{v!r} is not an erasure probability")
    if "scheme" not in raw:
        raise ConfigError("scheme", "missing")
    variants = []
    for i, v in enumerate(sw.get("variants") or [{"scheme": raw["scheme"]}]):
        if "scheme" not in v:
            raise ConfigError(f"sweep.variants[{i}].scheme", "missing")
        d = v.get("dists")
        variants.append(Variant(v.get("label", v["scheme"]), v["scheme"],
                                tuple(d) if d is not None else None))
    spec = SweepSpec(raw.get("name", name), raw, axis, values, variants,
                     list(sw.get("outputs", ["throughput"])), base_dir, raw.get("analysis") or {})
    for o in spec.outputs:
        if o not in ("throughput", "recovery", "per"):
            raise ConfigError("sweep.outputs", f"unknown output {o!r}")
    # builds every point, so a bad sweep fails before any run
    points = spec.points()
    shapes = {(c.k, c.N, c.M) for _, _, c in points} if axis not in ("N", "k") else set()
    if len(shapes) > 1:
        raise ConfigError("sweep.variants", "variants must share k, N and M")
    return spec


def with_seed(spec: SweepSpec, seed: int | None) -> SweepSpec:
    if seed is None:
        return spec
    raw = dict(spec.raw)
    raw["master_seed"] = int(seed)
    return sweep_from_raw(raw, spec.base_dir, spec.name)


def with_trials(spec: SweepSpec, trials: int | None) -> SweepSpec:
    if trials is None:
        return spec
    raw = dict(spec.raw)
    raw["trials"] = int(trials)
    return sweep_from_raw(raw, spec.base_dir, spec.name)


def row_for(cfg: ScenarioConfig, variant: Variant) -> dict:
    M = cfg.M
    inter = [cfg.erasures.link(u, v) for u in range(M) for v in range(M) if u != v]
    row = {"scheme": cfg.scheme, "M": M, "k": cfg.k, "N": cfg.N,
           "e_inter": float(np.mean(inter)) if inter else 0.0,
           "F": cfg.F, "variant": variant.label}
    for i in range(M):
        row[f"e_{i + 1}"] = float(cfg.erasures.user_to_dest[i])
    return row


def simulate_sweep(spec: SweepSpec, workers: int = 1):
    """Yields (row, stats) per point, in axis-major order."""
    for _, var, cfg in spec.points():
        stats = run_trials(cfg, workers=workers)
        ag = aggregate(stats)
        row = row_for(cfg, var)
        row.update(trials=ag.trials, mean_throughput=ag.mean_throughput, ci95=ag.ci95,
                   mean_frames=ag.mean_frames, incomplete_count=ag.incomplete_count)
        yield row, cfg, stats


def recovery_rows(cfg: ScenarioConfig, variant: Variant, stats, frames: int) -> list[dict]:
    curve = mean_recovery_curve(stats, frames)
    base = row_for(cfg, variant)
    return [{**base, "frame": i + 1, "recovered": float(v)} for i, v in enumerate(curve)]


def per_rows(cfg: ScenarioConfig, variant: Variant, stats, grid) -> list[dict]:
    """Fraction of trials the destination has not decoded once it holds
    overhead * M * n received symbols."""
    base = row_for(cfg, variant)
    need = []
    for s in stats:
        need.append(s.dest_received / (cfg.M * cfg.n) if s.complete else math.inf)
    need = np.array(need)
    return [{**base, "overhead": float(x), "per": float(np.mean(need > x + 1e-12))} for x in grid]
