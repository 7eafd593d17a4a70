import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from raptorcoop.analysis import pcc_user_recursion
from raptorcoop.analysis.pcc import (PartsLayout, pcc_destination_model,
                                     pcc_destination_unrecovered, symmetric_received,
                                     transcript_layout, transcript_received,
                                     transcript_type_counts, user_unrecovered)
from raptorcoop.analysis.andor import and_or_iterate
from raptorcoop.codec import DegreeDistribution
from raptorcoop.protocol.config import config_from_dict
from raptorcoop.protocol.simulate import run_trial
from raptorcoop.tables import fcc_table, partial_recovery_omega, pcc_table


def test_dead_links_recover_nothing():
    rec = pcc_user_recursion(pcc_table(2), 1000, 100, 2, 1.0, 10)
    assert np.all(rec.s == 0)


def test_recursion_saturates():
    rec = pcc_user_recursion(partial_recovery_omega(), 1000, 100, 2, 0.0, 15)
    assert np.all(np.diff(rec.s) >= 0)
    assert rec.s[-1] > 900


def test_decode_period_delays_sharing():
    a = pcc_user_recursion(pcc_table(2), 2000, 200, 2, 0.2, 12, F=1).s
    b = pcc_user_recursion(pcc_table(2), 2000, 200, 2, 0.2, 12, F=3).s
    assert np.all(b <= a + 1e-9)


weights = st.lists(st.floats(0.0, 1.0), min_size=2, max_size=20).filter(lambda w: sum(w) > 0.1)


@settings(max_examples=100, deadline=None)
@given(w=weights, e=st.floats(0.0, 1.0), N=st.integers(10, 400), k=st.integers(50, 2000))
def test_recursion_monotone_in_iteration_and_frame(w, e, N, k):
    dist = DegreeDistribution.from_weights([0.0] + w)
    frames = min(8, int(np.ceil(3 * k / N)))
    rec = pcc_user_recursion(dist, k, N, 2, e, frames)
    for traj in rec.trajectories:
        assert np.all(np.diff(traj) <= 1e-12)
    assert np.all(np.diff(rec.p) <= 1e-12)


def test_parts_layout_validation():
    with pytest.raises(ValueError):
        PartsLayout([[10.0, -1.0]])
    lay = PartsLayout([[600.0, 500.0]])
    with pytest.raises(ValueError):
        lay.check(1000)


def test_layout_merge_keeps_totals():
    s = pcc_user_recursion(pcc_table(2), 2000, 200, 2, 0.1, 12).s
    lay = PartsLayout.from_trajectory(s, 2000, 2, 12)
    small = lay.merged(3)
    assert all(len(r) <= 3 for r in small.parts)
    for a, b in zip(lay.parts, small.parts):
        assert sum(a) == pytest.approx(sum(b))


def test_destination_without_cooperation_is_point_to_point():
    # no partner ever recovers anything: each user is a single-type LT receiver
    omega = fcc_table(1)
    k, N = 2000, 200
    p = pcc_destination_unrecovered(omega, [0.0] * 20, k, N, [0.2, 0.2], 26)
    ref = and_or_iterate(pcc_destination_model(
        omega, PartsLayout([[k], [k]]), {1: 13 * N * 0.8, 2: 13 * N * 0.8}, k)).p
    assert p == pytest.approx(user_unrecovered(PartsLayout([[k], [k]]), ref), abs=1e-9)


def test_transcript_layout_conserves_symbols():
    cfg = config_from_dict({"M": 2, "k": 1000, "N": 100, "scheme": "pcc", "master_seed": 3,
                            "erasures": {"user_to_dest": [0.4, 0.4], "inter_user": 0.2},
                            "dists": ["pcc:2"]})
    st = run_trial(cfg, 0, record=True)
    layout, part_of = transcript_layout(st.first_shared_frame, cfg.k, 2, st.frames_used)
    assert [sum(r) for r in layout.parts] == [cfg.k, cfg.k]
    assert part_of.max() == layout.n_types - 1
    counts = transcript_type_counts(st.dest_neighbors, part_of)
    assert sum(counts.values()) == pytest.approx(st.dest_received)
    small, _ = transcript_layout(st.first_shared_frame, cfg.k, 2, 3)
    assert small.n_types < layout.n_types


def test_symmetric_received_counts():
    rec = symmetric_received(100, [0.0, 0.5], 5)
    assert rec[(0, 1)] == 100 and rec[(1, 1)] == 50 and rec[(0, 3)] == 100
    assert (1, 3) not in rec
    assert sum(transcript_received([4, 4, 2], 2).values()) == 10


def test_destination_threshold_matches_simulation():
    from raptorcoop.protocol.runner import run_trials
    k, N = 1000, 100
    cfg = config_from_dict({"M": 2, "k": k, "N": N, "scheme": "pcc", "trials": 40,
                            "erasures": {"user_to_dest": [0.4, 0.4], "inter_user": 0.2},
                            "dists": ["pcc:2"]})
    stats = run_trials(cfg)
    S = max(len(s.dest_per_slot) for s in stats)
    mc = np.array([np.mean([1 - sum(s.dest_per_slot[min(t, len(s.dest_per_slot) - 1)]) / (2 * k)
                            for s in stats]) for t in range(S)])
    s = pcc_user_recursion(cfg.dists[0], k, N, 2, 0.2, 40).s
    an = np.array([pcc_destination_unrecovered(cfg.dists[0], s, k, N, [0.4, 0.4], t).mean()
                   for t in range(1, S + 1)])
    cross_mc = int(np.argmax(mc < 0.5))
    cross_an = int(np.argmax(an < 0.5))
    assert abs(cross_mc - cross_an) <= 2
    # well away from the threshold the curves agree closely
    far = np.abs(np.arange(S) - cross_mc) > 4
    assert np.max(np.abs(mc - an)[far]) < 0.05
