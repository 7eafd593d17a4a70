"""Time-slotted execution of the four transmission schemes.

One trial is a loop over time frames; frame f has M slots and user u sends N
coded symbols in slot u.  After every slot the destination's incremental
peeling decoder is checked; once it holds all M*k intermediates the ACK stops
the run (the slot in flight counts as sent).  Users keep their own decoders
for what they overhear and switch their encoding policy at frame ends:

* nocoop:  own block, fixed distribution
* perfect: all M blocks, fixed distribution
* fcc:     own block plus every fully decoded partner block, with the
           distribution indexed by the number of blocks in the union
* pcc:     own block plus every partner symbol recovered so far, fixed
           distribution, refreshed every F frames
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..channel import ENCODE, LINK, PAYLOAD, PRECODE, StreamRegistry, rng_stream, survivors
from ..codec import PeelingDecoder, Precode
from ..codec.lt import draw_neighbors
from .config import ScenarioConfig


class SchemeMismatch(ValueError):
    pass


def control_overhead(M: int, k: int, T_bits: int, N: int, F: int = 1) -> float:
    """Recovered-set header size over message length, as a fraction.

    Each header is a (M-1)k-bit map of which partner packets are decoded; it
    is sent once per decoding period of F frames.
    """
    if min(M, k, T_bits, N, F) <= 0:
        raise ValueError("all arguments must be positive")
    return (M - 1) * k / (T_bits * N * F)


@dataclass
class TranscriptStats:
    scheme: str
    trial: int
    complete: bool
    frames_used: int
    slots_used: int
    symbols_sent: list[int]
    throughput: float | None
    per_tf_recovery: list[list[float]] = field(default_factory=list)
    dest_decode_slot: list[int | None] = field(default_factory=list)
    fcc_switch_tf: list[list[int]] = field(default_factory=list)
    payload_ok: bool | None = None
    dest_per_slot: list[list[int]] = field(default_factory=list)
    dest_neighbors: list[list[int]] | None = None
    first_shared_frame: np.ndarray | None = None
    dest_received: int = 0

    @property
    def total_sent(self) -> int:
        return sum(self.symbols_sent)


def build_precode(cfg: ScenarioConfig) -> Precode:
    return Precode(cfg.precode, cfg.n, rng_stream(cfg.master_seed, (PRECODE,)))


def _random_packets(rng, count: int, bits: int) -> list[int]:
    nbytes = (bits + 7) // 8
    raw = rng.integers(0, 256, size=(count, nbytes), dtype=np.uint8)
    mask = (1 << bits) - 1
    return [int.from_bytes(row.tobytes(), "little") & mask for row in raw]


class _Trial:
    def __init__(self, cfg: ScenarioConfig, trial: int, precode: Precode, record: bool = False):
        self.cfg = cfg
        self.record = record
        self.dest_neighbors: list[list[int]] = []
        self.first_shared = np.zeros(cfg.M * cfg.k, dtype=np.int64)
        self.trial = trial
        self.reg = StreamRegistry(cfg.master_seed)
        M, k = cfg.M, cfg.k
        self.payload = cfg.fidelity == "payload"
        self.values = None
        self.sources = None
        if self.payload:
            self.sources = []
            self.values = []
            for u in range(M):
                msg = _random_packets(self.reg.stream(trial, PAYLOAD, u), cfg.n, cfg.T)
                self.sources.append(msg)
                self.values.extend(precode.encode(msg))
        checks = [precode.constraints(u * k) for u in range(M)]

        self.dest = PeelingDecoder(M, k, payload=self.payload)
        for block in checks:
            for eq in block:
                self.dest.add(eq, 0)

        self.coop = cfg.scheme in ("fcc", "pcc")
        self.users: list[PeelingDecoder | None] = [None] * M
        self.listening = [False] * M
        if self.coop and M > 1:
            for u in range(M):
                dec = PeelingDecoder(M, k, payload=self.payload)
                for i in range(u * k, (u + 1) * k):
                    dec.preset(i, self.values[i] if self.payload else None)
                for v, block in enumerate(checks):
                    if v != u:
                        for eq in block:
                            dec.add(eq, 0)
                self.users[u] = dec
                self.listening[u] = True

        own = [np.arange(u * k, (u + 1) * k) for u in range(M)]
        if cfg.scheme == "perfect":
            self.unions = [np.arange(M * k) for _ in range(M)]
        else:
            self.unions = own
        self.dist_of = [cfg.dists[0]] * M
        self.partners_used = [0] * M
        self.switches: list[list[int]] = [[] for _ in range(M)]

    def _encode(self, u: int, f: int):
        cfg = self.cfg
        rng = self.reg.stream(self.trial, f, ENCODE, u)
        union = self.unions[u]
        degrees = self.dist_of[u].sample(rng, cfg.N)
        positions = draw_neighbors(union.size, degrees, rng)
        ids = union.tolist()
        nbrs = [[ids[p] for p in pos] for pos in positions]
        if not self.payload:
            return nbrs, None
        values = self.values
        pays = []
        for nb in nbrs:
            acc = 0
            for s in nb:
                acc ^= values[s]
            pays.append(acc)
        return nbrs, pays

    def _deliver(self, dec: PeelingDecoder, nbrs, pays, mask):
        add = dec.add
        if pays is None:
            for i in np.flatnonzero(mask).tolist():
                add(nbrs[i])
        else:
            for i in np.flatnonzero(mask).tolist():
                add(nbrs[i], pays[i])

    def _end_of_frame(self, f: int):
        cfg = self.cfg
        M, k = cfg.M, cfg.k
        for u, dec in enumerate(self.users):
            if dec is None or not self.listening[u]:
                continue
            counts = dec.state.counts
            if cfg.scheme == "fcc":
                done = [v for v in range(M) if v != u and counts[v] == k]
                if len(done) > self.partners_used[u]:
                    self.partners_used[u] = len(done)
                    blocks = [u] + done
                    self.unions[u] = np.concatenate(
                        [np.arange(b * k, (b + 1) * k) for b in blocks])
                    self.dist_of[u] = cfg.dists[len(blocks) - 1]
                    self.switches[u].append(f + 1)
                if len(done) == M - 1:
                    self.listening[u] = False
            elif f % cfg.F == 0:
                known = np.frombuffer(bytes(dec.state.known), dtype=np.uint8)
                others = np.flatnonzero(known)
                others = others[(others < u * k) | (others >= (u + 1) * k)]
                self.unions[u] = np.concatenate([np.arange(u * k, (u + 1) * k), others])
                if self.record:
                    fresh = others[self.first_shared[others] == 0]
                    self.first_shared[fresh] = f + 1
                if sum(counts) == M * k:
                    self.listening[u] = False

    def _recovery_snapshot(self) -> list[float]:
        cfg = self.cfg
        out = []
        for u, dec in enumerate(self.users):
            if dec is None:
                out.append(0.0)
            else:
                c = dec.state.counts
                out.append((sum(c) - c[u]) / (cfg.M - 1))
        return out

    def run(self) -> TranscriptStats:
        cfg = self.cfg
        M, k, N = cfg.M, cfg.k, cfg.N
        e = cfg.erasures
        sent = [0] * M
        dest_slot: list[int | None] = [None] * M
        recovery = []
        per_slot: list[list[int]] = []
        received = 0
        slot = 0
        complete = False
        f = 0
        for f in range(1, cfg.max_frames + 1):
            for u in range(M):
                slot += 1
                nbrs, pays = self._encode(u, f)
                sent[u] += N
                mask = survivors(N, e.link(u, None), self.reg.stream(self.trial, f, LINK, u, M))
                self._deliver(self.dest, nbrs, pays, mask)
                received += int(np.count_nonzero(mask))
                if self.record:
                    self.dest_neighbors.extend(nbrs[i] for i in np.flatnonzero(mask).tolist())
                counts = self.dest.state.counts
                per_slot.append(list(counts))
                for v in range(M):
                    if dest_slot[v] is None and counts[v] == k:
                        dest_slot[v] = slot
                if self.dest.complete:
                    complete = True
                    break
                if self.coop:
                    for v in range(M):
                        if v == u or not self.listening[v]:
                            continue
                        m = survivors(N, e.link(u, v), self.reg.stream(self.trial, f, LINK, u, v))
                        self._deliver(self.users[v], nbrs, pays, m)
            if complete:
                recovery.append(self._recovery_snapshot())
                break
            self._end_of_frame(f)
            recovery.append(self._recovery_snapshot())
        total = sum(sent)
        throughput = None
        if complete:
            throughput = M * cfg.n / total
            if cfg.fold_overhead and cfg.scheme == "pcc":
                throughput *= 1.0 - control_overhead(M, k, cfg.T, N, cfg.F)
        payload_ok = None
        if self.payload and complete:
            vals = self.dest.state.values
            payload_ok = all(vals[u * k + i] == self.sources[u][i]
                             for u in range(M) for i in range(cfg.n))
        return TranscriptStats(
            scheme=cfg.scheme, trial=self.trial, complete=complete, frames_used=f,
            slots_used=slot, symbols_sent=sent, throughput=throughput,
            per_tf_recovery=recovery, dest_decode_slot=dest_slot,
            fcc_switch_tf=self.switches, payload_ok=payload_ok, dest_per_slot=per_slot,
            dest_neighbors=self.dest_neighbors if self.record else None,
            first_shared_frame=self.first_shared if self.record else None,
            dest_received=received)


def run_trial(cfg: ScenarioConfig, trial: int, precode: Precode | None = None,
              record: bool = False) -> TranscriptStats:
    """One trial.  With record=True the transcript keeps every symbol the
    destination received and, per symbol, the first frame a partner encoded it
    (0 if never)."""
    if precode is None:
        precode = build_precode(cfg)
    return _Trial(cfg, trial, precode, record).run()


def _require(cfg: ScenarioConfig, scheme: str):
    if cfg.scheme != scheme:
        raise SchemeMismatch(f"config scheme is {cfg.scheme!r}, expected {scheme!r}")


def run_nocoop(cfg: ScenarioConfig, trial: int = 0) -> TranscriptStats:
    _require(cfg, "nocoop")
    return run_trial(cfg, trial)


def run_perfect(cfg: ScenarioConfig, trial: int = 0) -> TranscriptStats:
    _require(cfg, "perfect")
    return run_trial(cfg, trial)


def run_fcc(cfg: ScenarioConfig, trial: int = 0) -> TranscriptStats:
    _require(cfg, "fcc")
    return run_trial(cfg, trial)


def run_pcc(cfg: ScenarioConfig, trial: int = 0) -> TranscriptStats:
    _require(cfg, "pcc")
    return run_trial(cfg, trial)
