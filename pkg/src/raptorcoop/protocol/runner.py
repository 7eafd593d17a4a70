"""Multi-trial execution and aggregation of transcripts."""
from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .config import ScenarioConfig
from .simulate import TranscriptStats, build_precode, run_trial


@dataclass(frozen=True)
class Aggregate:
    trials: int
    mean_throughput: float
    ci95: float
    mean_frames: float
    incomplete_count: int
    throughputs: tuple[float, ...]

    @property
    def std(self) -> float:
        return float(np.std(self.throughputs, ddof=1)) if len(self.throughputs) > 1 else 0.0


def _run_chunk(args):
    cfg, indices = args
    precode = build_precode(cfg)
    return [run_trial(cfg, t, precode) for t in indices]


def run_trials(cfg: ScenarioConfig, trials: int | None = None, workers: int = 1,
               first_trial: int = 0) -> list[TranscriptStats]:
    """Run trials first_trial.. in order; results are keyed by trial index."""
    trials = cfg.trials if trials is None else trials
    indices = list(range(first_trial, first_trial + trials))
    if workers <= 1 or trials <= 1:
        return _run_chunk((cfg, indices))
    chunks = [(cfg, indices[i::workers]) for i in range(workers)]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        parts = list(pool.map(_run_chunk, chunks))
    out = [s for part in parts for s in part]
    out.sort(key=lambda s: s.trial)
    return out


def aggregate(stats: list[TranscriptStats]) -> Aggregate:
    """Order-insensitive reduction; incomplete runs are counted, not averaged."""
    stats = sorted(stats, key=lambda s: s.trial)
    done = [s.throughput for s in stats if s.complete]
    frames = [s.frames_used for s in stats]
    n = len(done)
    mean = float(np.mean(done)) if n else math.nan
    ci = 1.96 * float(np.std(done, ddof=1)) / math.sqrt(n) if n > 1 else math.nan
    return Aggregate(trials=len(stats), mean_throughput=mean, ci95=ci,
                     mean_frames=float(np.mean(frames)) if frames else math.nan,
                     incomplete_count=len(stats) - n, throughputs=tuple(done))


def mean_recovery_curve(stats: list[TranscriptStats], frames: int) -> np.ndarray:
    """Mean per-user partner symbols recovered at the end of frames 1..frames.

    Runs that stopped early hold their last value.
    """
    rows = []
    for s in stats:
        curve = [float(np.mean(r)) for r in s.per_tf_recovery]
        if not curve:
            curve = [0.0]
        curve = curve[:frames] + [curve[-1]] * (frames - len(curve))
        rows.append(curve)
    return np.mean(rows, axis=0)
