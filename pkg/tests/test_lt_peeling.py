import numpy as np
import pytest
from scipy import stats

from conftest import degree_one_closure, gf2_recoverable
from raptorcoop.codec import (CodedSymbol, DegreeDistribution, PeelingDecoder, RecoveryState,
                              SymbolGraph, lt_encode, peel_decode, strip_known)
from raptorcoop.tables import fcc_table


def _graph(rows, M=1, k=3, payloads=None):
    coded = [CodedSymbol(0, 0, frozenset(r), None if payloads is None else payloads[i])
             for i, r in enumerate(rows)]
    return SymbolGraph(coded, RecoveryState(M, k, payload=payloads is not None))


def test_encode_degree_one(rng):
    out = lt_encode(range(4), DegreeDistribution({1: 1.0}), 4, rng)
    assert len(out) == 4
    assert all(len(c.neighbors) == 1 and next(iter(c.neighbors)) in range(4) for c in out)


def test_encode_deterministic():
    a = lt_encode(range(50), fcc_table(1), 100, np.random.default_rng(3))
    b = lt_encode(range(50), fcc_table(1), 100, np.random.default_rng(3))
    assert [c.neighbors for c in a] == [c.neighbors for c in b]


def test_encode_empty_union(rng):
    with pytest.raises(ValueError, match="no source symbols"):
        lt_encode([], fcc_table(1), 3, rng)


def test_encode_clamps_degree(rng):
    out = lt_encode(range(3), DegreeDistribution({8: 1.0}), 20, rng)
    assert all(c.neighbors == frozenset(range(3)) for c in out)


def test_encode_uniform_over_union(rng):
    # own k=100 plus 30 partner ids
    union = list(range(100)) + list(range(1000, 1030))
    out = lt_encode(union, fcc_table(1), 10**5, rng)
    hits = {}
    total = 0
    for c in out:
        assert c.neighbors <= set(union)
        for s in c.neighbors:
            hits[s] = hits.get(s, 0) + 1
            total += 1
    obs = np.array([hits.get(s, 0) for s in union])
    assert stats.chisquare(obs).pvalue > 0.01


def test_encode_payload_is_xor(rng):
    values = {i: int(rng.integers(0, 2**32)) for i in range(20)}
    for c in lt_encode(range(20), fcc_table(1), 50, rng, values=values):
        acc = 0
        for s in c.neighbors:
            acc ^= values[s]
        assert c.payload == acc


def test_peel_hand_traced():
    assert peel_decode(_graph([{0}, {0, 1}, {1, 2}])).ids() == {0, 1, 2}


def test_peel_nothing():
    assert len(peel_decode(_graph([{0, 1}]))) == 0


def test_peel_all_degree_one():
    assert peel_decode(_graph([{i} for i in range(3)])).ids() == {0, 1, 2}


def test_peel_max_iters():
    rows = [{0}, {0, 1}, {1, 2}]
    assert peel_decode(_graph(rows), max_iters=1).ids() == {0}


def test_strip_known():
    known = RecoveryState(1, 3)
    known.mark(0)
    g = strip_known(_graph([{0, 1}]), known)
    assert g.coded[0].neighbors == frozenset({1})
    same = strip_known(_graph([{0, 1}]), RecoveryState(1, 3))
    assert same.coded[0].neighbors == frozenset({0, 1})


def test_strip_known_payload():
    known = RecoveryState(1, 3, payload=True)
    known.mark(0, 5)
    g = strip_known(_graph([{0, 1}], payloads=[5 ^ 9]), known)
    assert g.coded[0].payload == 9
    assert peel_decode(g).values == {1: 9}


def _random_rows(rng, k, count):
    rows = []
    for _ in range(count):
        d = int(rng.integers(1, min(4, k) + 1))
        rows.append(set(rng.choice(k, size=d, replace=False).tolist()))
    return rows


def test_peeling_matches_oracles(rng):
    for _ in range(500):
        k = int(rng.integers(1, 13))
        rows = _random_rows(rng, k, int(rng.integers(1, 2 * k + 2)))
        got = peel_decode(_graph(rows, k=k)).ids()
        assert got == degree_one_closure(rows)
        assert got <= gf2_recoverable(rows, k)


def test_incremental_decoder_order_independent(rng):
    for _ in range(100):
        k = int(rng.integers(2, 51))
        rows = _random_rows(rng, k, int(rng.integers(k // 2, 2 * k)))
        ref = peel_decode(_graph(rows, k=k)).ids()
        for _ in range(3):
            dec = PeelingDecoder(1, k)
            for i in rng.permutation(len(rows)):
                dec.add(sorted(rows[i]))
            assert dec.state.ids() == ref


def test_payload_recovery_is_bit_exact(rng):
    k = 200
    values = [int(v) for v in rng.integers(0, 2**63, size=k)]
    dec = PeelingDecoder(1, k, payload=True)
    for c in lt_encode(range(k), fcc_table(1), 400, rng, values=dict(enumerate(values))):
        dec.add(sorted(c.neighbors), c.payload)
    assert len(dec.state) > 0
    assert all(values[s] == v for s, v in dec.state.values.items())


def test_recovery_state_bookkeeping():
    st = RecoveryState(2, 3)
    st.mark_block(1)
    assert st.counts == [0, 3] and st.user_complete(1) and not st.complete()
    assert not st.mark(4)
