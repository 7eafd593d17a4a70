"""LT encoding over arbitrary unions of message-symbol identifiers.

Symbols are identified by global integers ``user * k + index``; see
:func:`symbol_id`.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .distributions import DegreeDistribution


def symbol_id(user: int, index: int, k: int) -> int:
    return user * k + index


def split_id(sid: int, k: int) -> tuple[int, int]:
    return divmod(sid, k)


@dataclass(frozen=True)
class CodedSymbol:
    origin_user: int
    frame: int
    neighbors: frozenset
    payload: int | None = None

    @property
    def degree(self) -> int:
        return len(self.neighbors)


def sample_degree(dist: DegreeDistribution, rng: np.random.Generator) -> int:
    return int(dist.sample(rng))


def draw_neighbors(union_size: int, degrees, rng: np.random.Generator):
    """Positions into the union, distinct within each symbol.

    Draws with replacement in one batch and redraws (without replacement)
    only the symbols that happened to repeat a position; both routes are
    uniform over d-subsets so the mixture is too.
    """
    degrees = np.minimum(np.asarray(degrees, dtype=np.int64), union_size)
    draws = rng.integers(0, union_size, size=int(degrees.sum()))
    out = []
    start = 0
    for d in degrees.tolist():
        chunk = draws[start:start + d].tolist()
        start += d
        if len(set(chunk)) < d:
            chunk = rng.choice(union_size, size=d, replace=False).tolist()
        out.append(chunk)
    return out


def encode_neighbors(union, dist: DegreeDistribution, count: int,
                     rng: np.random.Generator) -> list[list[int]]:
    """Neighbor id lists for `count` coded symbols over `union`."""
    union = np.asarray(union)
    if union.size == 0:
        raise ValueError("no source symbols")
    if count <= 0:
        return []
    degrees = dist.sample(rng, count)
    positions = draw_neighbors(union.size, degrees, rng)
    ids = union.tolist()
    return [[ids[p] for p in pos] for pos in positions]


def xor_payload(neighbors, values) -> int:
    acc = 0
    for s in neighbors:
        acc ^= values[s]
    return acc


def lt_encode(union, dist: DegreeDistribution, count: int, rng: np.random.Generator,
              *, origin_user: int = 0, frame: int = 0, values=None) -> list[CodedSymbol]:
    """Generate `count` coded symbols over the ids in `union`.

    If `values` (id -> int payload) is given, each symbol carries the XOR of
    its neighbors' payloads.  Degrees larger than the union are clamped.
    """
    if count < 0:
        raise ValueError("count must be non-negative")
    out = []
    for nbrs in encode_neighbors(union, dist, count, rng):
        payload = xor_payload(nbrs, values) if values is not None else None
        out.append(CodedSymbol(origin_user, frame, frozenset(nbrs), payload))
    return out
