"""AND-OR models of destination decoding under fully coded cooperation.

OR types are users.  A coded symbol sent by a user whose union covers the
blocks in Y (|Y| = n) is drawn with distribution Phi^(n); its neighbors land
on exactly the users in V with probability q_{Y,V}.  Two occupancy rules are
offered:

* ``"exact"``: neighbors pick users independently and uniformly from Y, so
  q_{Y,V} = sum_d Phi_d sum_{W subset V} (-1)^{|V-W|} (|W|/|Y|)^d.  For two
  users this gives Phi(0.5) for each single user and 1 - 2 Phi(0.5) for both.
* ``"printed"``: the product form sum_{d>=|V|} Phi_d (|V|/|Y|)^{d-|V|} |Y|^{-|V|},
  kept for comparison; it does not reduce to the two-user weights.
"""
from __future__ import annotations

import itertools
import math
from typing import Mapping, Sequence

import numpy as np

from ..codec import DegreeDistribution
from .andor import AndOrModel, bits, mask_of

TYPE_CAP = 6


def _edge(dist: DegreeDistribution) -> np.ndarray:
    return np.asarray(dist.edge_perspective(), dtype=float)


def fcc_2user_model(N1: float, N2: float, N3: float, phi1: DegreeDistribution,
                    phi2: DegreeDistribution, k: int) -> AndOrModel:
    """Destination model after N1, N2 own-block symbols and N3 two-block symbols."""
    if min(N1, N2, N3) < 0:
        raise ValueError("symbol counts must be non-negative")
    w1, w2 = _edge(phi1), _edge(phi2)
    mu1, mu2 = phi1.mean, phi2.mean
    half = phi2(0.5)
    D = max(w1.size, w2.size)
    w1 = np.pad(w1, (0, D - w1.size))
    w2 = np.pad(w2, (0, D - w2.size))
    omega: dict[int, np.ndarray] = {}
    alpha: dict[tuple[int, int], float] = {}
    for j, Nj in enumerate((N1, N2)):
        V = 1 << j
        mass = Nj + N3 * half
        if mass > 0:
            omega[V] = (Nj * w1 + N3 * half * w2) / mass
        else:
            omega[V] = w1.copy()
        alpha[(j, V)] = (Nj * mu1 + N3 * half * mu2) / k
    omega[3] = w2.copy()
    both = N3 * (1.0 - 2.0 * half) * mu2 / (2 * k)
    alpha[(0, 3)] = both
    alpha[(1, 3)] = both
    return AndOrModel(2, np.array([k, k], dtype=float), omega, alpha, labels=["U1", "U2"])


def occupancy(dist: DegreeDistribution, n_union: int, n_exact: int, rule: str = "exact") -> float:
    """Probability that a symbol over n_union equal blocks touches exactly a given n_exact of them."""
    if not 1 <= n_exact <= n_union:
        return 0.0
    pmf = dist.pmf
    d = np.arange(pmf.size)
    if rule == "exact":
        total = 0.0
        for w in range(0, n_exact + 1):
            sign = (-1) ** (n_exact - w)
            total += sign * math.comb(n_exact, w) * float(np.dot(pmf, (w / n_union) ** d))
        return max(total, 0.0)
    if rule == "printed":
        tail = d >= n_exact
        return float(np.dot(pmf[tail], (n_exact / n_union) ** (d[tail] - n_exact))) / n_union ** n_exact
    raise ValueError(f"unknown occupancy rule {rule!r}")


def fcc_muser_model(counts: Mapping[Sequence[int] | int, float],
                    phis: Sequence[DegreeDistribution], k: int, M: int,
                    cap: int | None = None, rule: str = "exact") -> AndOrModel:
    """M-user destination model.

    ``counts`` maps a user subset Y (iterable of 0-based users, or a bit mask)
    to the number of received symbols encoded over the union of Y's blocks.
    ``phis[n-1]`` is the distribution used over n blocks.
    """
    if M > TYPE_CAP:
        raise ValueError(f"M={M} exceeds the cap of {TYPE_CAP}: exponential type space")
    if len(phis) < M:
        raise ValueError("need one distribution per union size 1..M")
    cap = M if cap is None else min(cap, M)
    Ys = {}
    for Y, c in counts.items():
        mask = Y if isinstance(Y, int) else mask_of(Y)
        if mask <= 0 or mask >= 1 << M:
            raise ValueError(f"subset {Y!r} is empty or outside the {M} users")
        if c < 0:
            raise ValueError("symbol counts must be non-negative")
        Ys[mask] = Ys.get(mask, 0.0) + float(c)
    edges = [_edge(p) for p in phis[:M]]
    D = max(e.size for e in edges)
    edges = [np.pad(e, (0, D - e.size)) for e in edges]
    mus = [p.mean for p in phis[:M]]

    omega: dict[int, np.ndarray] = {}
    alpha: dict[tuple[int, int], float] = {}
    for r in range(1, cap + 1):
        for combo in itertools.combinations(range(M), r):
            V = mask_of(combo)
            T = 0.0
            wsum = np.zeros(D)
            rate = 0.0
            for Y, c in Ys.items():
                if V & ~Y or c == 0:
                    continue
                nY = len(bits(Y))
                q = occupancy(phis[nY - 1], nY, r, rule)
                T += c * q
                wsum += c * q * edges[nY - 1]
                rate += c * q * mus[nY - 1]
            omega[V] = wsum / T if T > 0 else edges[r - 1].copy()
            for j in combo:
                alpha[(j, V)] = rate / (r * k)
    return AndOrModel(M, np.full(M, float(k)), omega, alpha,
                      labels=[f"U{u + 1}" for u in range(M)])


def type_counts(counts: Mapping, phis: Sequence[DegreeDistribution], M: int,
                rule: str = "exact") -> dict[int, float]:
    """Expected number T_V of received symbols touching exactly the users in V."""
    out = {}
    for r in range(1, M + 1):
        for combo in itertools.combinations(range(M), r):
            V = mask_of(combo)
            T = 0.0
            for Y, c in counts.items():
                mask = Y if isinstance(Y, int) else mask_of(Y)
                if V & ~mask:
                    continue
                nY = len(bits(mask))
                T += c * occupancy(phis[nY - 1], nY, r, rule)
            out[V] = T
    return out


def fcc_union_model(counts: Mapping, phis: Sequence[DegreeDistribution], k: int, M: int,
                    known: Sequence[int] = ()) -> AndOrModel:
    """Receiver model keyed by encoding union rather than touched set.

    Symbols encoded over the blocks in Y use Phi^(|Y|) and spread their
    children hypergeometrically over Y; blocks listed in ``known`` start and
    stay recovered.  Exact under the tree assumption, and the form used for
    throughput prediction.
    """
    if M > TYPE_CAP:
        raise ValueError(f"M={M} exceeds the cap of {TYPE_CAP}: exponential type space")
    omega: dict[int, np.ndarray] = {}
    alpha: dict[tuple[int, int], float] = {}
    for Y, c in counts.items():
        mask = Y if isinstance(Y, int) else mask_of(Y)
        if c <= 0:
            continue
        members = bits(mask)
        phi = phis[len(members) - 1]
        omega[mask] = _edge(phi)
        for j in members:
            alpha[(j, mask)] = phi.mean * c / (len(members) * k)
    p0 = np.ones(M)
    fixed = np.zeros(M, dtype=bool)
    for u in known:
        p0[u] = 0.0
        fixed[u] = True
    return AndOrModel(M, np.full(M, float(k)), omega, alpha, p0=p0, restrict=False, fixed=fixed,
                      labels=[f"U{u + 1}" for u in range(M)])
