"""Throughput upper bounds for the two-user cooperative channel."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence


def _check(*probs):
    for e in probs:
        if not 0.0 <= e <= 1.0:
            raise ValueError(f"erasure probability {e} outside [0, 1]")


def fcc_throughput_bound(e: float, e1: float, e2: float) -> float:
    """Bound for full-block cooperation given inter-user erasure e."""
    _check(e, e1, e2)
    lo, hi = min(e1, e2), max(e1, e2)
    if e <= lo:
        return (2.0 - e1 - e2) / 2.0
    if e >= hi:
        return 1.0 - hi
    return (1.0 - e) * (2.0 - e1 - e2) / (2.0 - e - lo)


@dataclass(frozen=True)
class PccBound:
    value: float
    L1: int | None
    L2: int | None
    reached: bool


def _frames_needed(ea: float, eb: float, N: int, k: int, s: Sequence[float]) -> int | None:
    # smallest L with N(1-ea)(1 + sum_{i=2..L} (k-s_i)/k) + N(1-eb) sum_{i=1..L} s_i/k >= k
    own = 1.0
    relay = 0.0
    for L in range(1, len(s) + 1):
        si = s[L - 1]
        if L >= 2:
            own += (k - si) / k
        relay += si / k
        if N * (1 - ea) * own + N * (1 - eb) * relay >= k - 1e-9:
            return L
    return None


def pcc_throughput_bound(e1: float, e2: float, N: int, k: int, s: Sequence[float]) -> PccBound:
    """k / ((L+1) N) with L the larger of the two users' frame counts.

    s[i-1] is the number of partner symbols recovered by frame i; frames past
    the end of s repeat its last value, up to a cap of 10k/N frames.  If the
    condition is never met within the cap the bound is 0 and ``reached`` is False.
    """
    _check(e1, e2)
    if N <= 0 or k <= 0:
        raise ValueError("N and k must be positive")
    s = [float(x) for x in s]
    if any(b < a - 1e-9 for a, b in zip(s, s[1:])):
        raise ValueError("s must be non-decreasing")
    if any(x < 0 or x > k + 1e-9 for x in s):
        raise ValueError("s entries must lie in [0, k]")
    cap = max(len(s), -(-10 * k // N))
    tail = s[-1] if s else 0.0
    s = s + [tail] * (cap - len(s))
    L1 = _frames_needed(e1, e2, N, k, s)
    L2 = _frames_needed(e2, e1, N, k, s)
    if L1 is None or L2 is None:
        return PccBound(0.0, L1, L2, False)
    L = max(L1, L2)
    return PccBound(k / ((L + 1) * N), L1, L2, True)
