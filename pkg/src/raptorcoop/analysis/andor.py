"""Multi-type AND-OR tree evaluation.

OR nodes are message symbols of a type j (a user, or a part of a user's
message); AND nodes are coded symbols whose neighbors span a set V of OR types.
A model holds, for every AND type V:

* ``omega[V]``  weights over the number d of other children an AND node has
  when reached through one of its edges (edge-perspective degree minus one),
* ``alpha[(j, V)]`` the Poisson rate of type-V AND children of a type-j OR node,

and for every OR type a pool size.  Given d, the children of a type-V node are
split over the types of V as a multivariate hypergeometric draw from the pools,
restricted to compositions in which every type of V other than the parent's
has at least one child; each (j, V) table is renormalized after restriction.
With ``restrict=False`` the split is the plain hypergeometric draw, which is
the right law when V is the set of types a symbol was encoded over rather
than the set it happens to touch.

The table is never enumerated during evaluation.  With q_w = 1 - p_w,

    sum_I beta_I prod_w q_w^{i_w}
        = sum_d omega_d / C(S_V, d) * [t^d] sum_{j in W subset V} (-1)^{|V-W|} prod_{w in W} (1 + q_w t)^{n_w}

and the inner alternating sums over W are a Moebius transform shared by all
AND types, so one evaluation costs O(2^T * T * D) for T OR types.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from ..codec.hypergeom import log_binom


def bits(mask: int) -> list[int]:
    return [i for i in range(mask.bit_length()) if mask >> i & 1]


def mask_of(types) -> int:
    m = 0
    for t in types:
        m |= 1 << t
    return m


@dataclass
class AndOrModel:
    n_or_types: int
    pools: np.ndarray
    omega: dict[int, np.ndarray]
    alpha: dict[tuple[int, int], float]
    p0: np.ndarray | None = None
    labels: list[str] = field(default_factory=list)
    restrict: bool = True
    fixed: np.ndarray | None = None     # OR types whose p stays at p0 (already known)

    def __post_init__(self):
        self.pools = np.asarray(self.pools, dtype=float)
        if self.pools.shape != (self.n_or_types,):
            raise ValueError("one pool size per OR type")
        for V, w in self.omega.items():
            if not 0 < V < (1 << self.n_or_types):
                raise ValueError(f"AND type {V:b} outside the OR types")
            if np.any(np.asarray(w) < 0):
                raise ValueError("negative omega weight")
        for (j, V), a in self.alpha.items():
            if a < 0:
                raise ValueError("negative alpha")
            if not V >> j & 1:
                raise ValueError(f"alpha for OR type {j} on AND type {V:b} not containing it")
            if V not in self.omega:
                raise ValueError(f"alpha given for AND type {V:b} without omega")
        if self.p0 is None:
            self.p0 = np.ones(self.n_or_types)
        self.p0 = np.asarray(self.p0, dtype=float)
        if self.fixed is None:
            self.fixed = np.zeros(self.n_or_types, dtype=bool)
        self.fixed = np.asarray(self.fixed, dtype=bool)
        self.max_children = max((len(w) for w in self.omega.values()), default=1) - 1
        self._prepare()

    def _prepare(self):
        # per (j, V) row: omega_V(d) / C(S_V, d) (rescaled), then the normalizer at q = 1
        D = self.max_children
        scale = np.log(max(self.pools.sum(), 1.0))
        d = np.arange(D + 1)
        keys = [key for key in self.alpha if key[1] in self.omega]
        self._keys = keys
        self._j = np.array([j for j, _ in keys], dtype=int)
        self._V = np.array([V for _, V in keys], dtype=int)
        self._Vj = self._V & ~(1 << self._j) if keys else self._V
        self._rate = np.array([self.alpha[key] for key in keys], dtype=float)
        rows = {}
        for V, w in self.omega.items():
            S = self.pools[bits(V)].sum()
            ok = d <= S
            inv = np.zeros(D + 1)
            inv[ok] = np.exp(-(log_binom(S, d[ok]) - d[ok] * scale))
            wv = np.zeros(D + 1)
            wv[: len(w)] = w
            rows[V] = wv * inv
        self._W = np.array([rows[V] for _, V in keys]).reshape(len(keys), D + 1)
        self._Z = np.ones(len(keys))
        self._Z = self._raw_values(np.ones(self.n_or_types))

    @property
    def and_types(self) -> list[int]:
        return sorted(self.omega)

    def _subset_products(self, q: np.ndarray) -> np.ndarray:
        """P[W][d] = [t^d] prod_{w in W} (1 + q_w t)^{n_w}, scaled by S^-d."""
        T = self.n_or_types
        D = self.max_children
        scale = np.log(max(self.pools.sum(), 1.0))
        d = np.arange(D + 1)
        P = np.zeros((1 << T, D + 1))
        P[0, 0] = 1.0
        for b in range(T):
            n = self.pools[b]
            ok = d <= n
            f = np.zeros(D + 1)
            f[ok] = np.exp(log_binom(n, d[ok]) - d[ok] * scale) * np.power(q[b], d[ok])
            # polynomial product truncated at degree D
            lo = P[: 1 << b]
            hi = np.zeros_like(lo)
            for i in np.flatnonzero(f):
                hi[:, i:] += f[i] * lo[:, : D + 1 - i]
            P[1 << b: 1 << (b + 1)] = hi
        return P

    @staticmethod
    def _moebius(P: np.ndarray, T: int) -> np.ndarray:
        G = P.copy()
        for b in range(T):
            view = G.reshape(-1, 2, 1 << b, G.shape[1])
            view[:, 1] -= view[:, 0]
        return G

    def _raw_values(self, q: np.ndarray) -> np.ndarray:
        if not self._keys:
            return np.zeros(0)
        P = self._subset_products(q)
        if self.restrict:
            G = self._moebius(P, self.n_or_types)
            series = G[self._V] + G[self._Vj]
        else:
            series = P[self._V]
        raw = np.einsum("kd,kd->k", self._W, series)
        with np.errstate(divide="ignore", invalid="ignore"):
            return np.where(self._Z > 0, raw / self._Z, 0.0)

    def and_values(self, q) -> dict:
        """Probability that an AND node reached from type j delivers (all other children known)."""
        vals = self._raw_values(np.asarray(q, dtype=float))
        return dict(zip(self._keys, vals.tolist()))

    def step(self, p: np.ndarray) -> np.ndarray:
        vals = self._raw_values(1.0 - p)
        expo = np.zeros(self.n_or_types)
        np.add.at(expo, self._j, self._rate * vals)
        return np.where(self.fixed, self.p0, np.exp(-expo))

    def beta_table(self, j: int, V: int) -> list[tuple[tuple[int, ...], float]]:
        """Explicit beta_{V,I} entries for parent type j, for checks on small models.

        I is indexed over all OR types (zeros outside V); only admissible
        compositions appear, and the probabilities sum to one.
        """
        members = bits(V)
        w = np.asarray(self.omega[V], dtype=float)
        S = self.pools[members].sum()
        rows = []
        for d, wd in enumerate(w):
            if wd == 0 or d > S:
                continue
            for comp in _compositions(d, len(members)):
                if self.restrict and any(c == 0 for t, c in zip(members, comp) if t != j):
                    continue
                if any(c > self.pools[t] for t, c in zip(members, comp)):
                    continue
                lp = sum(log_binom(self.pools[t], c) for t, c in zip(members, comp)) - log_binom(S, d)
                I = [0] * self.n_or_types
                for t, c in zip(members, comp):
                    I[t] = c
                rows.append((tuple(I), wd * float(np.exp(lp))))
        z = sum(p for _, p in rows)
        return [(I, p / z) for I, p in rows] if z > 0 else []


def _compositions(total: int, parts: int):
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


@dataclass
class AndOrResult:
    p: np.ndarray
    iterations: int
    converged: bool
    history: np.ndarray

    @property
    def unrecovered(self) -> np.ndarray:
        return self.p


def and_or_iterate(model: AndOrModel, iters: int = 1000, tol: float = 1e-8) -> AndOrResult:
    """Iterate p_l from p_0 until the largest change drops below tol."""
    p = np.array(model.p0, dtype=float)
    hist = [p.copy()]
    converged = False
    it = 0
    for it in range(1, iters + 1):
        new = model.step(p)
        delta = np.max(np.abs(new - p)) if new.size else 0.0
        p = new
        hist.append(p.copy())
        if delta < tol:
            converged = True
            break
    return AndOrResult(p=p, iterations=it, converged=converged, history=np.array(hist))


def single_user_model(omega_edge, alpha: float, pool: float = 1.0) -> AndOrModel:
    """One OR type, one AND type: p_l = exp(-alpha * omega(1 - p_{l-1}))."""
    return AndOrModel(1, np.array([pool]), {1: np.asarray(omega_edge, dtype=float)},
                      {(0, 1): float(alpha)})


def all_masks(n: int, cap: int | None = None):
    for r in range(1, n + 1 if cap is None else min(n, cap) + 1):
        for combo in itertools.combinations(range(n), r):
            yield mask_of(combo)


def history_csv(history, labels=None) -> str:
    """p trajectory as CSV text: iteration index, then one column per OR type."""
    import csv
    import io

    h = np.asarray(history, dtype=float)
    if h.ndim == 1:             # a single-type trajectory
        h = h[:, None]
    labels = list(labels) if labels else [f"p{j}" for j in range(h.shape[1])]
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["iteration"] + labels)
    for i, row in enumerate(h):
        w.writerow([i] + [f"{v:.12g}" for v in row])
    return buf.getvalue()
