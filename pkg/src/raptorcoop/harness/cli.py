"""Command-line entry point: simulate | analyze | optimize | bounds | sweep.

Exit codes: 0 ok, 1 runtime error, 2 config error.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from ..analysis import fcc_throughput_bound, pcc_throughput_bound, pcc_user_recursion, predict
from ..analysis.predict import mean_inter_erasure
from ..optimizer import DesignError, DesignParams, design_fcc, pcc_design_fixed_point
from ..protocol.config import ConfigError, default_dists
from ..protocol.simulate import control_overhead
from . import csvout
from .catalog import load_raw
from .sweep import (SweepSpec, per_rows, recovery_rows, row_for, simulate_sweep, sweep_from_raw,
                    with_seed, with_trials)

PER_GRID = np.round(np.arange(1.0, 2.0 + 1e-9, 0.02), 4)


def load_spec(ref: str, seed: int | None = None, trials: int | None = None) -> SweepSpec:
    raw, base_dir, name = load_raw(ref)
    spec = sweep_from_raw(raw, base_dir, name)
    return with_trials(with_seed(spec, seed), trials)


def _out(args, spec_name: str, suffix: str) -> Path:
    return Path(args.out) / f"{spec_name}_{suffix}"


def _emit(args, spec: SweepSpec, suffix: str, columns, rows) -> Path:
    seed = int(spec.raw.get("master_seed", 0))
    path = csvout.write(_out(args, spec.name, suffix), columns, rows, spec.digest(), seed)
    print(f"wrote {path}")
    return path


def _sim_cols(spec: SweepSpec) -> list[str]:
    M = spec.points()[0][2].M
    return csvout.sim_columns(M) + ["variant"]


def cmd_simulate(args) -> int:
    spec = load_spec(args.config, args.seed, args.trials)
    rows, rec, per = [], [], []
    frames = int(spec.analysis.get("frames", 0)) or None
    for row, cfg, stats in simulate_sweep(spec, workers=args.workers):
        rows.append(row)
        var = next(v for v in spec.variants if v.label == row["variant"])
        if "recovery" in spec.outputs:
            rec += recovery_rows(cfg, var, stats, frames or cfg.max_frames)
        if "per" in spec.outputs:
            per += per_rows(cfg, var, stats, PER_GRID)
    cols = _sim_cols(spec)
    _emit(args, spec, "simulate.csv", cols, rows)
    if rec:
        _emit(args, spec, "recovery.csv", cols + ["frame", "recovered"], rec)
    if per:
        _emit(args, spec, "per.csv", cols + ["overhead", "per"], per)
    return 0


def _prediction_row(cfg, var) -> dict:
    pred = predict(cfg)
    row = row_for(cfg, var)
    row.update(trials=0, mean_throughput=pred.throughput, ci95=math.nan,
               mean_frames=(pred.slots / cfg.M) if pred.slots else math.nan,
               incomplete_count=0 if pred.complete else 1)
    return row


def cmd_analyze(args) -> int:
    spec = load_spec(args.config, args.seed)
    kind = spec.analysis.get("kind")
    if kind == "user_recursion":
        _, var, cfg = spec.points()[0]
        if cfg.M < 2:
            raise ConfigError("M", "partner recovery needs at least two users")
        frames = int(spec.analysis.get("frames", cfg.max_frames))
        rec = pcc_user_recursion(cfg.dists[0], cfg.k, cfg.N, cfg.M, mean_inter_erasure(cfg),
                                 frames, F=cfg.F)
        base = row_for(cfg, var)
        rows = [{**base, "frame": i + 1, "s": float(s), "p": float(p)}
                for i, (s, p) in enumerate(zip(rec.s, rec.p))]
        _emit(args, spec, "s.csv", _sim_cols(spec) + ["frame", "s", "p"], rows)
        traj = [{"frame": i + 1, "iteration": l, "p": float(v)}
                for i, t in enumerate(rec.trajectories) for l, v in enumerate(t)]
        _emit(args, spec, "trajectories.csv", ["frame", "iteration", "p"], traj)
        return 0
    rows = [_prediction_row(cfg, var) for _, var, cfg in spec.points()]
    _emit(args, spec, "analyze.csv", _sim_cols(spec), rows)
    if kind == "control_overhead":
        cfg = spec.points()[0][2]
        orows = []
        for ratio in spec.analysis.get("k_over_N", [cfg.k / cfg.N]):
            for F in spec.analysis.get("F", [1, 2, 3, 4]):
                N = cfg.k / ratio
                orows.append({"M": cfg.M, "k": cfg.k, "N": N, "T": cfg.T, "F": int(F),
                              "k_over_N": float(ratio),
                              "overhead_pct": 100.0 * control_overhead(cfg.M, cfg.k, cfg.T, N, int(F))})
        _emit(args, spec, "overhead.csv", ["M", "k", "N", "T", "F", "k_over_N", "overhead_pct"], orows)
    return 0


def _bounds_for(cfg, pcc_dist=None):
    e1, e2 = cfg.erasures.user_to_dest
    e = mean_inter_erasure(cfg)
    omega = pcc_dist or default_dists("pcc", 2)[0]
    frames = math.ceil(10 * cfg.k / cfg.N)
    s = pcc_user_recursion(omega, cfg.k, cfg.N, 2, e, frames, F=cfg.F).s
    s = np.minimum(np.maximum.accumulate(s), cfg.k)
    pb = pcc_throughput_bound(e1, e2, cfg.N, cfg.k, s)
    return fcc_throughput_bound(e, e1, e2), pb


def _require_two_users(spec: SweepSpec):
    if spec.points()[0][2].M != 2:
        raise ConfigError("M", "bounds defined for 2-user CMAC")


def _pcc_dist(spec: SweepSpec, value):
    for v in spec.variants:
        if v.scheme == "pcc" and v.dists is not None:
            return spec.config(value, v).dists[0]
    return None


def cmd_bounds(args) -> int:
    spec = load_spec(args.config, args.seed)
    _require_two_users(spec)
    rows = []
    seen = set()
    for value, var, cfg in spec.points():
        if value in seen:
            continue
        seen.add(value)
        fb, pb = _bounds_for(cfg, _pcc_dist(spec, value))
        rows.append({"axis": spec.axis or "", "value": value, "e_inter": mean_inter_erasure(cfg),
                     "e_1": cfg.erasures.user_to_dest[0], "e_2": cfg.erasures.user_to_dest[1],
                     "fcc_bound": fb, "pcc_bound": pb.value, "pcc_L1": pb.L1, "pcc_L2": pb.L2,
                     "pcc_reached": pb.reached})
    _emit(args, spec, "bounds.csv", ["axis", "value", "e_inter", "e_1", "e_2", "fcc_bound",
                                     "pcc_bound", "pcc_L1", "pcc_L2", "pcc_reached"], rows)
    return 0


def cmd_sweep(args) -> int:
    """Simulation, prediction and (two users) bound side by side."""
    spec = load_spec(args.config, args.seed, args.trials)
    two = spec.points()[0][2].M == 2
    bounds = {}
    rows = []
    for row, cfg, _ in simulate_sweep(spec, workers=args.workers):
        var = next(v for v in spec.variants if v.label == row["variant"])
        row["predicted_throughput"] = _prediction_row(cfg, var)["mean_throughput"]
        if two and cfg.scheme in ("fcc", "pcc"):
            key = (cfg.erasures, cfg.F, cfg.N, cfg.k)
            if key not in bounds:
                bounds[key] = _bounds_for(cfg)
            fb, pb = bounds[key]
            row["bound"] = fb if cfg.scheme == "fcc" else pb.value
        rows.append(row)
    _emit(args, spec, "sweep.csv", _sim_cols(spec) + ["predicted_throughput", "bound"], rows)
    return 0


_OPT_KEYS = {"name", "kind", "M", "k", "N", "D", "delta", "c", "step", "e_inter",
             "max_outer", "part_cap", "tol_fraction"}


def _design_params(raw: dict) -> tuple[str, DesignParams, dict]:
    if not isinstance(raw, dict):
        raise ConfigError("params", "top level must be an object")
    unknown = set(raw) - _OPT_KEYS
    if unknown:
        raise ConfigError(sorted(unknown)[0], "unknown key")
    kind = raw.get("kind")
    if kind not in ("fcc", "pcc"):
        raise ConfigError("kind", "must be 'fcc' or 'pcc'")
    for key in ("M", "k") + (("N",) if kind == "pcc" else ()):
        if key not in raw:
            raise ConfigError(key, "missing")
    ints = {"M", "k", "N", "D", "part_cap", "max_outer"}
    kw = {}
    for key in ("M", "k", "N", "D", "delta", "c", "step", "e_inter", "part_cap"):
        if key in raw:
            v = raw[key]
            if isinstance(v, bool) or not isinstance(v, (int, float)) or (key in ints and v != int(v)):
                raise ConfigError(key, f"bad value {v!r}")
            kw[key] = int(v) if key in ints else float(v)
    try:
        params = DesignParams(**kw)
    except ValueError as exc:
        raise ConfigError("params", str(exc)) from None
    if not 0.0 <= params.e_inter <= 1.0:
        raise ConfigError("e_inter", "outside [0, 1]")
    extra = {"max_outer": int(raw.get("max_outer", 10)),
             "tol_fraction": float(raw.get("tol_fraction", 0.001))}
    if extra["max_outer"] < 1:
        raise ConfigError("max_outer", "must be >= 1")
    return kind, params, extra


def cmd_optimize(args) -> int:
    raw, _, name = load_raw(args.config)
    kind, params, extra = _design_params(raw)
    name = raw.get("name", name)
    try:
        if kind == "fcc":
            design = design_fcc(params)
            report = design.report()
        else:
            fp = pcc_design_fixed_point(params, extra["max_outer"], extra["tol_fraction"])
            design = fp.design
            report = design.report()
            report.update(outer_iterations=fp.iterations, converged=fp.converged,
                          s=[float(x) for x in fp.s], tv_steps=fp.tv_steps)
    except DesignError as exc:
        print(f"error: {exc}", file=sys.stderr)
        if exc.report:
            print(json.dumps(exc.report, indent=2), file=sys.stderr)
        return 1
    report.update(kind=kind, params={k: v for k, v in raw.items() if k != "name"})
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    dist_path = out / f"{name}_dist.txt"
    dist_path.write_text(design.dist.to_text())
    rep_path = out / f"{name}_report.json"
    rep_path.write_text(json.dumps(report, indent=2, sort_keys=True) + "\n")
    print(f"mean degree {design.mean:.4f}; wrote {dist_path} and {rep_path}")
    if np.any(design.residual_min < -1e-9):
        print("warning: negative residual after repair", file=sys.stderr)
        return 1
    return 0


VERBS = {"simulate": cmd_simulate, "analyze": cmd_analyze, "optimize": cmd_optimize,
         "bounds": cmd_bounds, "sweep": cmd_sweep}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="raptorcoop", description=__doc__.splitlines()[0])
    ap.add_argument("verb", choices=sorted(VERBS))
    ap.add_argument("--config", required=True,
                    help="JSON file, or the name of a shipped preset (see --list-presets)")
    ap.add_argument("--seed", type=int, default=None, help="override master_seed")
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--out", default=".", help="output directory")
    ap.add_argument("--trials", type=int, default=None, help="override trials")
    return ap


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    if argv and argv[0] == "--list-presets":
        from .catalog import preset_names
        print("\n".join(preset_names()))
        return 0
    args = build_parser().parse_args(argv)
    if args.seed is not None and not 0 <= args.seed < 2 ** 64:
        print("config error: --seed must be an unsigned 64-bit integer", file=sys.stderr)
        return 2
    if args.workers < 1 or (args.trials is not None and args.trials < 1):
        print("config error: --workers and --trials must be positive", file=sys.stderr)
        return 2
    try:
        return VERBS[args.verb](args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # noqa: BLE001 - top-level reporting
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
