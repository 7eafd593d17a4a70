"""Throughput predictions from the AND-OR models, aligned with simulated runs.

Every receiver is tracked in expectation: a slot of user u adds N(1 - e)
symbols to the receiver's count for u's current encoding union.  A block is
taken as recovered once its predicted unrecovered fraction drops to the
completion threshold: half a symbol without a precode, otherwise a fixed
share of the precode's redundancy (the regular precode repairs about 3%
random erasures at rate 0.95).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ..protocol.config import ScenarioConfig
from ..protocol.simulate import control_overhead
from .andor import and_or_iterate, mask_of
from .fcc import fcc_union_model
from .pcc import pcc_destination_unrecovered, pcc_user_recursion

REPAIR_SHARE = 0.6


def completion_threshold(cfg: ScenarioConfig, repair_share: float = REPAIR_SHARE) -> float:
    if cfg.precode.kind == "none":
        return 0.5 / cfg.k
    return repair_share * (1.0 - cfg.precode.rate)


@dataclass
class Prediction:
    scheme: str
    complete: bool
    slots: int | None
    throughput: float
    s: list[float] = field(default_factory=list)


def _throughput(cfg: ScenarioConfig, slots: int | None, scheme: str) -> float:
    if slots is None:
        return math.nan
    eta = cfg.M * cfg.n / (slots * cfg.N)
    if cfg.fold_overhead and scheme == "pcc":
        eta *= 1.0 - control_overhead(cfg.M, cfg.k, cfg.T, cfg.N, cfg.F)
    return eta


def _unrecovered(counts: dict, phis, k: int, M: int, known=()) -> np.ndarray:
    if not any(c > 0 for c in counts.values()):
        p = np.ones(M)
        p[list(known)] = 0.0
        return p
    return and_or_iterate(fcc_union_model(counts, phis, k, M, known)).p


def _schedule(cfg: ScenarioConfig, thr: float, phis, cooperative: bool, perfect: bool = False):
    """Slot-by-slot expectation run shared by nocoop, perfect and fcc."""
    M, k, N = cfg.M, cfg.k, cfg.N
    e = cfg.erasures
    decoded = [{u} for u in range(M)]
    everything = mask_of(range(M))
    dest: dict[int, float] = {}
    users: list[dict[int, float]] = [dict() for _ in range(M)]
    slot = 0
    for f in range(1, cfg.max_frames + 1):
        for u in range(M):
            slot += 1
            Y = everything if perfect else mask_of(decoded[u])
            dest[Y] = dest.get(Y, 0.0) + N * (1.0 - e.link(u, None))
            if np.all(_unrecovered(dest, phis, k, M) <= thr):
                return slot
            if cooperative:
                for v in range(M):
                    if v != u and len(decoded[v]) < M:
                        users[v][Y] = users[v].get(Y, 0.0) + N * (1.0 - e.link(u, v))
        if cooperative:
            for v in range(M):
                if len(decoded[v]) == M:
                    continue
                p = _unrecovered(users[v], phis, k, M, known=sorted(decoded[v]))
                decoded[v] |= {w for w in range(M) if p[w] <= thr}
    return None


def predict_nocoop(cfg: ScenarioConfig, thr: float | None = None) -> Prediction:
    thr = completion_threshold(cfg) if thr is None else thr
    phis = [cfg.dists[0]] * cfg.M
    slots = _schedule(cfg, thr, phis, cooperative=False)
    return Prediction("nocoop", slots is not None, slots, _throughput(cfg, slots, "nocoop"))


def predict_perfect(cfg: ScenarioConfig, thr: float | None = None) -> Prediction:
    thr = completion_threshold(cfg) if thr is None else thr
    phis = [cfg.dists[0]] * cfg.M
    slots = _schedule(cfg, thr, phis, cooperative=False, perfect=True)
    return Prediction("perfect", slots is not None, slots, _throughput(cfg, slots, "perfect"))


def predict_fcc(cfg: ScenarioConfig, thr: float | None = None) -> Prediction:
    thr = completion_threshold(cfg) if thr is None else thr
    slots = _schedule(cfg, thr, list(cfg.dists), cooperative=True)
    return Prediction("fcc", slots is not None, slots, _throughput(cfg, slots, "fcc"))


def mean_inter_erasure(cfg: ScenarioConfig) -> float:
    M = cfg.M
    vals = [cfg.erasures.link(u, v) for u in range(M) for v in range(M) if u != v]
    return float(np.mean(vals)) if vals else 1.0


def predict_pcc(cfg: ScenarioConfig, thr: float | None = None,
                per_user: int | None = None) -> Prediction:
    """Partner recovery from the symmetric recursion (mean inter-user erasure),
    then a bisection over slots on the destination model."""
    thr = completion_threshold(cfg) if thr is None else thr
    M = cfg.M
    omega = cfg.dists[0]
    e_dest = [cfg.erasures.link(u, None) for u in range(M)]
    if M > 1:
        rec = pcc_user_recursion(omega, cfg.k, cfg.N, M, mean_inter_erasure(cfg),
                                 cfg.max_frames, F=cfg.F)
        s = rec.s.tolist()
    else:
        s = [0.0] * cfg.max_frames
    memo: dict[int, bool] = {}

    def done(slots: int) -> bool:
        if slots not in memo:
            p = pcc_destination_unrecovered(omega, s, cfg.k, cfg.N, e_dest, slots,
                                            F=cfg.F, per_user=per_user)
            memo[slots] = bool(np.all(p <= thr))
        return memo[slots]

    hi = cfg.max_frames * M
    if not done(hi):
        return Prediction("pcc", False, None, math.nan, s)
    lo = 0
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if done(mid):
            hi = mid
        else:
            lo = mid
    return Prediction("pcc", True, hi, _throughput(cfg, hi, "pcc"), s)


_PREDICTORS = {"nocoop": predict_nocoop, "perfect": predict_perfect,
               "fcc": predict_fcc, "pcc": predict_pcc}


def predict(cfg: ScenarioConfig, **kw) -> Prediction:
    return _PREDICTORS[cfg.scheme](cfg, **kw)
