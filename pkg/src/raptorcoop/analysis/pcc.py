"""Analysis of partially coded cooperation.

User side: a symmetric recursion over time frames for s^(i), the number of a
partner's message symbols recovered by the end of frame i.  Destination side:
each user's block is cut into parts by the frame in which partners recovered
them; parts are the OR types of an AND-OR model whose AND types are the sets
of parts a coded symbol touches.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from ..codec import DegreeDistribution, conditional_distribution
from ..codec.hypergeom import log_binom
from .andor import AndOrModel, and_or_iterate

PART_CAP = 12


@dataclass
class PccRecursion:
    s: np.ndarray                 # s[i-1] = partner symbols recovered by end of frame i (real)
    p: np.ndarray                 # fixed point per frame
    trajectories: list[np.ndarray] = field(default_factory=list)   # p_l per frame


def _single_type_fixed_point(alpha: float, deriv: np.ndarray, iters: int, tol: float):
    """p_l = exp(-alpha * delta(1 - p_{l-1})), delta = deriv / deriv(1)."""
    norm = deriv.sum()
    if alpha <= 0 or norm <= 0:
        return np.ones(1)
    coeffs = deriv[::-1] / norm
    p = 1.0
    traj = [p]
    for _ in range(iters):
        new = math.exp(-alpha * np.polyval(coeffs, 1.0 - p))
        traj.append(new)
        if abs(new - p) < tol:
            p = new
            break
        p = new
    return np.array(traj)


def pcc_user_recursion(omega: DegreeDistribution, k: int, N: int, M: int, e_inter: float,
                       frames: int, iters: int = 1000, tol: float = 1e-8,
                       F: int = 1) -> PccRecursion:
    """Partner-side recovery s^(1..frames) in the symmetric M-user setting.

    In frame i+1 each partner encodes over k + (M-1)s^(i) symbols of which the
    (M-1)s^(i) recovered ones are treated as known; the degree law of all
    symbols received so far is the uniform mixture of the per-frame laws.
    With a decoding period F > 1 the encoders only learn s at frames that are
    multiples of F.
    """
    if frames < 1:
        raise ValueError("frames must be >= 1")
    if not 0.0 <= e_inter <= 1.0:
        raise ValueError("erasure probability outside [0, 1]")
    if M < 2:
        raise ValueError("recursion needs at least two users")
    s_prev = 0.0
    s_shared = 0.0
    laws: list[np.ndarray] = []
    s_out, p_out, trajs = [], [], []
    for i in range(frames):
        if i % F == 0:
            s_shared = s_prev
        known = int(round((M - 1) * s_shared))
        if known > 0:
            law = conditional_distribution(omega, k + known, known).pmf
        else:
            law = np.asarray(omega.pmf, dtype=float)
        laws.append(law)
        width = max(x.size for x in laws)
        delta = np.mean([np.pad(x, (0, width - x.size)) for x in laws], axis=0)
        d = np.arange(width)
        deriv = (d * delta)[1:]               # coefficients of Delta'(x)
        received = (i + 1) * (M - 1) * N * (1.0 - e_inter)
        alpha = received / ((M - 1) * k) * deriv.sum()
        traj = _single_type_fixed_point(alpha, deriv, iters, tol)
        p = float(traj[-1])
        s_prev = max(s_prev, k * (1.0 - p))
        s_out.append(s_prev)
        p_out.append(p)
        trajs.append(traj)
    return PccRecursion(np.array(s_out), np.array(p_out), trajs)


@dataclass
class PartsLayout:
    """Per user, the lengths of the parts its block is cut into.

    parts[t][i] is the length of the part recovered by partners in frame i+1;
    the last entry of each user is the part no partner had recovered.
    available[t][i] is the first frame in whose encoding the part is used by
    partners (None for the last, never-shared part).
    """
    parts: list[list[float]]
    available: list[list[int | None]] | None = None

    def __post_init__(self):
        for t, row in enumerate(self.parts):
            if any(x < 0 for x in row):
                raise ValueError(f"user {t}: negative part length")
        if self.available is None:
            self.available = [[i + 2 for i in range(len(row) - 1)] + [None] for row in self.parts]
        if [len(r) for r in self.available] != [len(r) for r in self.parts]:
            raise ValueError("available must match parts")

    def check(self, k: int):
        for t, row in enumerate(self.parts):
            if sum(row) > k + 1e-9:
                raise ValueError(f"user {t}: parts sum to {sum(row)} > k={k}")

    @property
    def n_types(self) -> int:
        return sum(len(r) for r in self.parts)

    def flat(self) -> list[tuple[int, int, float, int | None]]:
        out = []
        for t, row in enumerate(self.parts):
            for i, x in enumerate(row):
                out.append((t, i, x, self.available[t][i]))
        return out

    @classmethod
    def from_trajectory(cls, s: Sequence[float], k: int, M: int, upto: int, F: int = 1) -> "PartsLayout":
        """Symmetric layout: part i has length s^(i) - s^(i-1) for parts usable before frame upto."""
        parts, avail = [], []
        prev = 0.0
        row, arow = [], []
        for i, si in enumerate(s, start=1):
            first_use = _next_refresh(i, F)
            if first_use > upto:
                break
            si = min(float(si), float(k))
            if si - prev > 0:
                row.append(si - prev)
                arow.append(first_use)
            prev = si
        row.append(k - prev)
        arow.append(None)
        for _ in range(M):
            parts.append(list(row))
            avail.append(list(arow))
        return cls(parts, avail)

    def merged(self, per_user: int) -> "PartsLayout":
        """Merge adjacent shared parts until each user has at most per_user parts.

        The merged part keeps the earliest availability; the never-shared tail
        is left alone.
        """
        if per_user < 1:
            raise ValueError("per_user must be >= 1")
        parts, avail = [], []
        for row, arow in zip(self.parts, self.available):
            row, arow = list(row), list(arow)
            while len(row) > per_user:
                if len(row) == 2:
                    row = [row[0] + row[1]]
                    arow = [None]
                    break
                # smallest adjacent pair among shared parts
                i = min(range(len(row) - 2), key=lambda a: row[a] + row[a + 1])
                row[i:i + 2] = [row[i] + row[i + 1]]
                arow[i:i + 2] = [arow[i]]
            parts.append(row)
            avail.append(arow)
        return PartsLayout(parts, avail)


def _next_refresh(frame: int, F: int) -> int:
    """First frame whose encoding sees what was recovered by the end of ``frame``."""
    return -(-frame // F) * F + 1


def _exact_type_probs(omega: DegreeDistribution, lengths: np.ndarray) -> np.ndarray:
    """P(a symbol over the union of the given parts touches exactly subset W), for all W.

    Neighbors are drawn without replacement, so
    P(all inside W) = sum_d Omega_d C(S_W, d) / C(S, d).
    """
    n = lengths.size
    pmf = omega.pmf
    d = np.arange(pmf.size)
    S = lengths.sum()
    sub = np.zeros(1 << n)
    for mask in range(1 << n):
        SW = sum(lengths[b] for b in range(n) if mask >> b & 1)
        ok = (d <= SW) & (pmf > 0)
        if not ok.any():
            continue
        sub[mask] = float(np.dot(pmf[ok], np.exp(log_binom(SW, d[ok]) - log_binom(S, d[ok]))))
    G = sub.copy()
    for b in range(n):
        view = G.reshape(-1, 2, 1 << b)
        view[:, 1] -= view[:, 0]
    return np.clip(G, 0.0, None)


def symmetric_received(N: int, e_dest: Sequence[float], slots: int) -> dict[tuple[int, int], float]:
    """Expected destination receptions per (user, frame) over the first ``slots`` slots."""
    M = len(e_dest)
    out = {}
    for slot in range(slots):
        f, u = divmod(slot, M)
        out[(u, f + 1)] = N * (1.0 - e_dest[u])
    return out


def _union_members(layout: PartsLayout, u: int, f: int) -> list[int]:
    members = []
    for g, (t, _, x, av) in enumerate(layout.flat()):
        if x <= 0:
            continue
        if t == u or (av is not None and av <= f):
            members.append(g)
    return members


def union_type_counts(layout: PartsLayout, received: dict[tuple[int, int], float]) -> dict[int, float]:
    """T_U: received symbols keyed by the set of parts their sender encoded over."""
    counts: dict[int, float] = {}
    for (u, f), c in received.items():
        if c <= 0:
            continue
        U = 0
        for g in _union_members(layout, u, f):
            U |= 1 << g
        if U:
            counts[U] = counts.get(U, 0.0) + c
    return counts


def exact_type_counts(omega: DegreeDistribution, layout: PartsLayout,
                      received: dict[tuple[int, int], float]) -> dict[int, float]:
    """Expected T_V keyed by the exact set of parts a received symbol touches."""
    lengths = np.array([x for _, _, x, _ in layout.flat()])
    counts: dict[int, float] = {}
    cache: dict[tuple[int, ...], np.ndarray] = {}
    for (u, f), c in received.items():
        if c <= 0:
            continue
        members = _union_members(layout, u, f)
        key = tuple(members)
        if key not in cache:
            cache[key] = _exact_type_probs(omega, lengths[members])
        probs = cache[key]
        for local in range(1, 1 << len(members)):
            if probs[local] <= 0:
                continue
            V = 0
            for b, g in enumerate(members):
                if local >> b & 1:
                    V |= 1 << g
            counts[V] = counts.get(V, 0.0) + c * probs[local]
    return counts


def transcript_layout(first_shared: np.ndarray, k: int, M: int, upto: int) -> tuple[PartsLayout, np.ndarray]:
    """Parts from a recorded run: symbols grouped by the first frame a partner encoded them.

    Returns the layout and the flat part index of every global symbol id.
    """
    parts, avail = [], []
    part_of = np.zeros(M * k, dtype=np.int64)
    g = 0
    for t in range(M):
        fs = np.asarray(first_shared[t * k:(t + 1) * k])
        shared = sorted({int(x) for x in fs if 0 < x <= upto})
        row, arow = [], []
        for a in shared:
            idx = np.flatnonzero(fs == a)
            part_of[t * k + idx] = g
            row.append(float(idx.size))
            arow.append(a)
            g += 1
        rest = np.flatnonzero((fs == 0) | (fs > upto))
        part_of[t * k + rest] = g
        row.append(float(rest.size))
        arow.append(None)
        g += 1
        parts.append(row)
        avail.append(arow)
    return PartsLayout(parts, avail), part_of


def transcript_received(dest_received: Sequence[int], M: int, slots: int | None = None) -> dict:
    """Per (user, frame) reception counts from a recorded per-slot list."""
    out = {}
    n = len(dest_received) if slots is None else min(slots, len(dest_received))
    for slot in range(n):
        f, u = divmod(slot, M)
        out[(u, f + 1)] = float(dest_received[slot])
    return out


def transcript_type_counts(neighbor_lists, part_of: np.ndarray) -> dict[int, float]:
    """Count received symbols by the exact set of parts they touch.

    ``part_of`` maps a global symbol id to its flat part index.
    """
    counts: dict[int, float] = {}
    for nb in neighbor_lists:
        V = 0
        for g in np.unique(part_of[np.asarray(nb, dtype=int)]):
            V |= 1 << int(g)
        if V:
            counts[V] = counts.get(V, 0.0) + 1.0
    return counts


def pcc_destination_model(omega: DegreeDistribution, layout: PartsLayout,
                          type_counts: dict[int, float], k: int,
                          cap: int = PART_CAP, form: str = "union") -> AndOrModel:
    """Destination model with one OR type per message part.

    Every AND type shares the edge-perspective law of omega and
    alpha_{j,V} = mu T_V / S_V.  With form="union", V is the set of parts the
    sender encoded over and children are split hypergeometrically over it.
    With form="exact", V is the set of parts a symbol touches and the split
    is restricted to put at least one child in every other part of V.
    """
    if form not in ("union", "exact"):
        raise ValueError(f"unknown form {form!r}")
    layout.check(k)
    L = layout.n_types
    if L > cap:
        raise ValueError(f"{L} message parts exceed the cap of {cap}; merge adjacent parts "
                         "(PartsLayout.merged) before building the model")
    lengths = np.array([x for _, _, x, _ in layout.flat()])
    edge = np.asarray(omega.edge_perspective(), dtype=float)
    mu = omega.mean
    om: dict[int, np.ndarray] = {}
    alpha: dict[tuple[int, int], float] = {}
    for V, T in type_counts.items():
        if V <= 0 or V >= 1 << L:
            raise ValueError(f"type {V:b} outside the {L} parts")
        if T <= 0:
            continue
        members = [b for b in range(L) if V >> b & 1 and lengths[b] > 0]
        S = lengths[members].sum()
        if S <= 0:
            continue
        om[V] = edge
        for j in members:
            alpha[(j, V)] = mu * T / S
    labels = [f"U{t + 1}P{i + 1}" for t, i, _, _ in layout.flat()]
    return AndOrModel(L, np.rint(lengths), om, alpha, labels=labels, restrict=form == "exact")


def user_unrecovered(layout: PartsLayout, p: np.ndarray) -> np.ndarray:
    """Length-weighted unrecovered fraction per user."""
    out = []
    g = 0
    for row in layout.parts:
        tot = sum(row)
        acc = 0.0
        for x in row:
            acc += x * p[g]
            g += 1
        out.append(acc / tot if tot > 0 else 0.0)
    return np.array(out)


def pcc_destination_unrecovered(omega: DegreeDistribution, s: Sequence[float], k: int, N: int,
                                e_dest: Sequence[float], slots: int, F: int = 1,
                                per_user: int | None = None, form: str = "union",
                                iters: int = 1000, tol: float = 1e-8) -> np.ndarray:
    """Predicted per-user unrecovered fraction at the destination after ``slots`` slots,
    from the symmetric layout built on the partner recovery trajectory s."""
    M = len(e_dest)
    per_user = max(1, min(4, PART_CAP // M)) if per_user is None else per_user
    frame = (slots - 1) // M + 1
    layout = PartsLayout.from_trajectory(s, k, M, frame, F).merged(per_user)
    received = symmetric_received(N, e_dest, slots)
    if form == "union":
        T = union_type_counts(layout, received)
    else:
        T = exact_type_counts(omega, layout, received)
    model = pcc_destination_model(omega, layout, T, k, cap=max(PART_CAP, layout.n_types), form=form)
    res = and_or_iterate(model, iters=iters, tol=tol)
    return user_unrecovered(layout, res.p)
