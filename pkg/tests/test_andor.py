import itertools
import math

import numpy as np
import pytest

from raptorcoop.analysis import (AndOrModel, and_or_iterate, fcc_2user_model, fcc_muser_model,
                                 fcc_union_model, single_user_model)
from raptorcoop.analysis.andor import bits
from raptorcoop.analysis.fcc import occupancy, type_counts
from raptorcoop.codec import DegreeDistribution
from raptorcoop.tables import fcc_table, fcc_tables


def _lt_fixed_point(dist, alpha, iters=5000):
    # textbook single-type recursion p <- exp(-alpha * omega'(1-p)/omega'(1))
    w = dist.edge_perspective()
    p = 1.0
    for _ in range(iters):
        p = math.exp(-alpha * np.polyval(w[::-1], 1 - p))
    return p


@pytest.mark.parametrize("alpha", [0.5, 2.0, 5.0, 6.5])
def test_single_type_matches_textbook(alpha):
    dist = fcc_table(1)
    model = single_user_model(dist.edge_perspective(), alpha, pool=10**6)
    res = and_or_iterate(model, iters=5000, tol=1e-13)
    assert res.p[0] == pytest.approx(_lt_fixed_point(dist, alpha), abs=1e-6)


def test_iterates_are_monotone():
    # near threshold: slow, but every step moves down
    res = and_or_iterate(fcc_2user_model(9000, 4000, 5000, fcc_table(1), fcc_table(2), 10000))
    assert np.all(np.diff(res.history, axis=0) <= 1e-12)


def _brute_and_value(model, j, V, q):
    return sum(b * np.prod([q[t] ** i for t, i in enumerate(I)])
               for I, b in model.beta_table(j, V))


@pytest.mark.parametrize("restrict", [True, False])
def test_subset_transform_matches_enumeration(rng, restrict):
    T = 3
    pools = np.array([7.0, 5.0, 9.0])
    omega, alpha = {}, {}
    for V in range(1, 1 << T):
        w = rng.random(6)
        omega[V] = w / w.sum()
        for j in bits(V):
            alpha[(j, V)] = float(rng.random())
    model = AndOrModel(T, pools, omega, alpha, restrict=restrict)
    q = rng.random(T)
    vals = model.and_values(q)
    for (j, V), v in vals.items():
        table = model.beta_table(j, V)
        assert sum(b for _, b in table) == pytest.approx(1.0)
        assert v == pytest.approx(_brute_and_value(model, j, V, q), rel=1e-9, abs=1e-12)


def test_model_validation():
    with pytest.raises(ValueError):
        AndOrModel(1, np.array([5.0]), {1: np.array([1.0])}, {(0, 1): -1.0})
    with pytest.raises(ValueError):
        AndOrModel(2, np.array([5.0, 5.0]), {1: np.array([1.0])}, {(1, 1): 1.0})


def test_two_user_occupancy():
    phi = fcc_table(2)
    half = phi(0.5)
    assert occupancy(phi, 2, 1) == pytest.approx(half)
    assert occupancy(phi, 2, 2) == pytest.approx(1 - 2 * half)
    assert occupancy(phi, 1, 1) == pytest.approx(1.0)
    # the printed product form does not reduce to the two-user weights
    assert occupancy(phi, 2, 1, rule="printed") == pytest.approx(half)
    assert occupancy(phi, 2, 2, rule="printed") == pytest.approx((1 - phi.pmf[1]) / 4)
    assert abs(occupancy(phi, 2, 2, rule="printed") - (1 - 2 * half)) > 0.1


def test_occupancy_partitions_unity():
    phi = fcc_table(4)
    total = sum(math.comb(4, r) * occupancy(phi, 4, r) for r in range(1, 5))
    assert total == pytest.approx(1.0)


def test_muser_reduces_to_two_user():
    phis = fcc_tables(2)
    N1, N2, N3 = 8000.0, 3000.0, 6000.0
    ref = fcc_2user_model(N1, N2, N3, *phis, 10000)
    gen = fcc_muser_model({(0,): N1, (1,): N2, (0, 1): N3}, phis, 10000, 2)
    for key, a in ref.alpha.items():
        assert gen.alpha[key] == pytest.approx(a, rel=1e-12)
    for V, w in ref.omega.items():
        np.testing.assert_allclose(gen.omega[V], w, atol=1e-15)
    assert and_or_iterate(gen).p == pytest.approx(and_or_iterate(ref).p, abs=1e-12)


def test_type_counts_conserve_symbols():
    phis = fcc_tables(3)
    counts = {(0,): 100.0, (0, 1): 50.0, (0, 1, 2): 70.0}
    assert sum(type_counts(counts, phis, 3).values()) == pytest.approx(220.0)


def test_type_cap():
    with pytest.raises(ValueError, match="exponential"):
        fcc_muser_model({(0,): 1.0}, [fcc_table(1)] * 7, 100, 7)


def test_union_model_known_blocks_stay_known():
    phis = fcc_tables(2)
    model = fcc_union_model({(0, 1): 16000.0}, phis, 10000, 2, known=[0])
    p = and_or_iterate(model).p
    assert p[0] == 0.0
    # about 15% of the union symbols land wholly in the known block
    assert p[1] < 0.01


def test_union_model_decodes_with_enough_symbols():
    phis = fcc_tables(2)
    done = and_or_iterate(fcc_union_model({(0,): 11000, (1,): 11000}, phis, 10000, 2)).p
    short = and_or_iterate(fcc_union_model({(0,): 8000, (1,): 8000}, phis, 10000, 2)).p
    assert np.all(done < 0.03) and np.all(short > 0.3)


def test_history_csv():
    res = and_or_iterate(fcc_2user_model(12000, 12000, 0, fcc_table(1), fcc_table(2), 10000))
    from raptorcoop.analysis import history_csv
    lines = history_csv(res.history, ["U1", "U2"]).splitlines()
    assert lines[0] == "iteration,U1,U2"
    assert len(lines) == res.iterations + 2
    assert lines[1] == "0,1,1"
