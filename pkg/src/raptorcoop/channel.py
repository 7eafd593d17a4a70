"""Memoryless packet-erasure links and per-label random streams.

Every random draw in a simulation comes from a stream keyed by
``(master_seed, labels)``.  Streams are Philox counter generators seeded
through a SeedSequence whose spawn key is the label tuple, so distinct labels
give independent streams and a repeated label reproduces its stream exactly.
"""
from __future__ import annotations

import zlib
from dataclasses import dataclass

import numpy as np

# label kinds used by the simulator
ENCODE = 1
LINK = 2
PAYLOAD = 3
PRECODE = 4


class StreamCollisionError(RuntimeError):
    pass


def _label_key(labels) -> tuple[int, ...]:
    key = []
    for lab in labels:
        if isinstance(lab, str):
            key.append(zlib.crc32(lab.encode()))
        else:
            lab = int(lab)
            if lab < 0:
                raise ValueError("stream labels must be non-negative")
            key.append(lab)
    return tuple(key)


def rng_stream(master_seed: int, labels) -> np.random.Generator:
    seq = np.random.SeedSequence(int(master_seed), spawn_key=_label_key(labels))
    return np.random.Generator(np.random.Philox(seq))


class StreamRegistry:
    """Hands out streams and refuses to hand out the same label twice."""

    def __init__(self, master_seed: int):
        self.master_seed = int(master_seed)
        self._seen: set[tuple[int, ...]] = set()

    def stream(self, *labels) -> np.random.Generator:
        key = _label_key(labels)
        if key in self._seen:
            raise StreamCollisionError(f"stream {labels!r} already registered")
        self._seen.add(key)
        return rng_stream(self.master_seed, labels)


@dataclass(frozen=True)
class ErasureMatrix:
    """Erasure probabilities: user->destination and symmetric user<->user."""
    user_to_dest: tuple[float, ...]
    inter_user: tuple[tuple[float, ...], ...]

    def __post_init__(self):
        M = len(self.user_to_dest)
        if len(self.inter_user) != M or any(len(r) != M for r in self.inter_user):
            raise ValueError("inter_user must be an M x M matrix")
        for e in self.user_to_dest:
            _check_prob(e)
        for i in range(M):
            for j in range(M):
                if i == j:
                    continue
                _check_prob(self.inter_user[i][j])
                if self.inter_user[i][j] != self.inter_user[j][i]:
                    raise ValueError("inter-user erasures must be reciprocal")

    @classmethod
    def uniform(cls, user_to_dest, e_inter: float) -> "ErasureMatrix":
        M = len(user_to_dest)
        inter = tuple(tuple(0.0 if i == j else float(e_inter) for j in range(M))
                      for i in range(M))
        return cls(tuple(float(e) for e in user_to_dest), inter)

    @property
    def num_users(self) -> int:
        return len(self.user_to_dest)

    def link(self, tx: int, rx: int | None) -> float:
        """Erasure probability from user `tx` to user `rx` (None = destination)."""
        if rx is None:
            return self.user_to_dest[tx]
        return self.inter_user[tx][rx]


def _check_prob(e):
    if not 0.0 <= e <= 1.0:
        raise ValueError(f"erasure probability {e} outside [0, 1]")


def survivors(count: int, e: float, rng: np.random.Generator) -> np.ndarray:
    """Boolean mask of packets that get through."""
    _check_prob(e)
    if e == 0.0:
        return np.ones(count, dtype=bool)
    if e == 1.0:
        return np.zeros(count, dtype=bool)
    return rng.random(count) >= e


def transmit(symbols, e: float, rng: np.random.Generator) -> list:
    """Drop each symbol independently with probability e, keeping order."""
    symbols = list(symbols)
    mask = survivors(len(symbols), e, rng)
    return [s for s, ok in zip(symbols, mask) if ok]
