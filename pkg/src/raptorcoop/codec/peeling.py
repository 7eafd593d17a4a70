"""Peeling (degree-one elimination) decoding.

Two entry points share the same semantics:

* :func:`strip_known` / :func:`peel_decode` work on an immutable
  :class:`SymbolGraph` and count decoding sweeps, which is what the
  iteration-capped decoder in the tests and small examples needs.
* :class:`PeelingDecoder` is incremental: symbols are added one at a time and
  the ripple is drained immediately.  The protocol simulator uses it, since the
  fixed point of peeling does not depend on the order symbols are resolved in.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .lt import CodedSymbol


class RecoveryState:
    """Which message symbols of which user an observer has resolved."""

    def __init__(self, num_users: int, k: int, *, payload: bool = False):
        self.num_users = num_users
        self.k = k
        self.known = bytearray(num_users * k)
        self.counts = [0] * num_users
        self.values: dict[int, int] | None = {} if payload else None

    @property
    def size(self) -> int:
        return self.num_users * self.k

    def mark(self, sid: int, value: int | None = None) -> bool:
        if self.known[sid]:
            return False
        self.known[sid] = 1
        self.counts[sid // self.k] += 1
        if self.values is not None and value is not None:
            self.values[sid] = value
        return True

    def mark_block(self, user: int, values=None):
        base = user * self.k
        for i in range(self.k):
            self.mark(base + i, None if values is None else values[i])

    def __contains__(self, sid) -> bool:
        return bool(self.known[sid])

    def __len__(self) -> int:
        return sum(self.counts)

    def ids(self) -> set[int]:
        return {i for i, b in enumerate(self.known) if b}

    def user_complete(self, user: int) -> bool:
        return self.counts[user] == self.k

    def complete(self) -> bool:
        return sum(self.counts) == self.size

    def copy(self) -> "RecoveryState":
        out = RecoveryState(self.num_users, self.k)
        out.known = bytearray(self.known)
        out.counts = list(self.counts)
        out.values = None if self.values is None else dict(self.values)
        return out


@dataclass
class SymbolGraph:
    coded: list[CodedSymbol]
    known: RecoveryState
    payload: bool = field(default=False)


def strip_known(graph: SymbolGraph, known: RecoveryState) -> SymbolGraph:
    """Remove every edge into a known symbol, XORing its payload out.

    Symbols left with no neighbors are kept; they are inert.
    """
    merged = graph.known.copy()
    for sid in known.ids():
        merged.mark(sid, None if known.values is None else known.values.get(sid))
    flags = merged.known
    values = merged.values
    out = []
    for c in graph.coded:
        if not any(flags[s] for s in c.neighbors):
            out.append(c)
            continue
        keep = frozenset(s for s in c.neighbors if not flags[s])
        payload = c.payload
        if payload is not None and values is not None:
            for s in c.neighbors:
                if flags[s]:
                    payload ^= values[s]
        out.append(CodedSymbol(c.origin_user, c.frame, keep, payload))
    return SymbolGraph(out, merged, graph.payload)


def peel_decode(graph: SymbolGraph, max_iters: int | None = None) -> RecoveryState:
    """Resolve degree-one symbols sweep by sweep; return the newly recovered set.

    One sweep resolves every symbol that has degree one at its start.  The
    graph is not modified.
    """
    base = graph.known
    delta = RecoveryState(base.num_users, base.k, payload=base.values is not None)
    known = bytearray(base.known)
    nbrs = []
    vals = []
    adj: dict[int, list[int]] = {}
    ripple = []
    for i, c in enumerate(graph.coded):
        live = {s for s in c.neighbors if not known[s]}
        v = c.payload
        if v is not None and base.values is not None:
            for s in c.neighbors:
                if known[s]:
                    v ^= base.values[s]
        nbrs.append(live)
        vals.append(v)
        for s in live:
            adj.setdefault(s, []).append(i)
        if len(live) == 1:
            ripple.append(i)
    sweeps = 0
    while ripple and (max_iters is None or sweeps < max_iters):
        sweeps += 1
        resolved = {}
        for i in ripple:
            if len(nbrs[i]) == 1:
                s = next(iter(nbrs[i]))
                if not known[s] and s not in resolved:
                    resolved[s] = vals[i]
        ripple = []
        for s, v in resolved.items():
            known[s] = 1
            delta.mark(s, v)
            for i in adj.get(s, ()):
                live = nbrs[i]
                if s in live:
                    live.discard(s)
                    if vals[i] is not None and v is not None:
                        vals[i] ^= v
                    if len(live) == 1:
                        ripple.append(i)
    return delta


class PeelingDecoder:
    """Incremental peeling decoder over ``num_users * k`` message symbols.

    ``add`` strips edges into already-known symbols, then either resolves a
    degree-one symbol (draining the resulting ripple) or stores the symbol.
    In payload mode each stored symbol carries the XOR of its unresolved
    neighbors, so a symbol that drops to degree one hands over its neighbor's
    value directly.
    """

    def __init__(self, num_users: int, k: int, *, payload: bool = False):
        self.state = RecoveryState(num_users, k, payload=payload)
        self.payload = payload
        self._adj: list[list[int] | None] = [[] for _ in range(num_users * k)]
        self._deg: list[int] = []
        self._xor: list[int] = []
        self._val: list[int] = []
        self.received = 0

    def preset(self, sid: int, value: int | None = None):
        """Declare a symbol known from the outset (e.g. an observer's own)."""
        if self.state.known[sid]:
            return
        self._resolve(sid, value)

    def add(self, neighbors, payload: int | None = None):
        self.received += 1
        known = self.state.known
        live = []
        for s in neighbors:
            if known[s]:
                if self.payload:
                    payload ^= self.state.values[s]
            else:
                live.append(s)
        d = len(live)
        if d == 0:
            return
        if d == 1:
            self._resolve(live[0], payload)
            return
        c = len(self._deg)
        self._deg.append(d)
        x = 0
        adj = self._adj
        for s in live:
            x ^= s
            adj[s].append(c)
        self._xor.append(x)
        if self.payload:
            self._val.append(payload)

    def _resolve(self, sid: int, value):
        state = self.state
        known = state.known
        adj = self._adj
        deg = self._deg
        xor = self._xor
        val = self._val
        payload = self.payload
        stack = [(sid, value)]
        while stack:
            s, v = stack.pop()
            if known[s]:
                continue
            state.mark(s, v)
            for c in adj[s]:
                d = deg[c] - 1
                deg[c] = d
                xor[c] ^= s
                if payload:
                    val[c] ^= v
                if d == 1:
                    stack.append((xor[c], val[c] if payload else None))
            adj[s] = None

    @property
    def complete(self) -> bool:
        return self.state.complete()
