import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import stats

from raptorcoop.codec import (ConditionalDistribution, DegreeDistribution, DistributionFormatError,
                              conditional_distribution, hypergeom_matrix, log_binom, sample_degree)
from raptorcoop.tables import FCC_MEAN, fcc_table, partial_recovery_omega


def test_point_masses(rng):
    assert {sample_degree(DegreeDistribution({1: 1.0}), rng) for _ in range(50)} == {1}
    assert {sample_degree(DegreeDistribution({2: 1.0}), rng) for _ in range(50)} == {2}


def test_validation():
    with pytest.raises(ValueError):
        DegreeDistribution({1: 0.5, 2: 0.4})
    with pytest.raises(ValueError):
        DegreeDistribution({0: 0.5, 2: 0.5})
    with pytest.raises(ValueError):
        DegreeDistribution({1: 1.2, 2: -0.2})
    d = DegreeDistribution({1: 0.5, 3: 0.5})
    assert d.max_degree == 3 and d.mean == pytest.approx(2.0)


def test_table_mean_by_sampling(rng):
    dist = fcc_table(1)
    draws = dist.sample(rng, 10**6)
    # printed mean is for the unrounded coefficients
    assert abs(draws.mean() - FCC_MEAN[1]) < 0.05
    assert abs(draws.mean() - dist.mean) < 0.02


def test_histogram_chi2(rng):
    dist = fcc_table(2)
    draws = dist.sample(rng, 10**6)
    support = np.array(sorted(dist.probs))
    observed = np.array([(draws == d).sum() for d in support])
    expected = dist.pmf[support] * draws.size
    assert observed.sum() == draws.size
    assert stats.chisquare(observed, expected).pvalue > 0.01


def test_text_roundtrip_and_checksum():
    d = fcc_table(3)
    text = d.to_text()
    back = DegreeDistribution.from_text(text)
    assert back.tv_distance(d) < 1e-15
    with pytest.raises(DistributionFormatError):
        DegreeDistribution.from_text(text.replace(text.split("checksum ")[1][:8], "deadbeef"))
    bad = text.splitlines()
    bad[-1] = bad[-1].split()[0] + " 0.5"
    with pytest.raises(DistributionFormatError):
        DegreeDistribution.from_text("\n".join(bad))


def test_text_rejects_bad_sum():
    import zlib
    body = "1 0.5\n2 0.4"
    crc = zlib.crc32(body.encode()) & 0xFFFFFFFF
    with pytest.raises(DistributionFormatError):
        DegreeDistribution.from_text(f"max_degree 2\nchecksum {crc:08x}\n{body}\n")


def test_edge_perspective_sums_to_one():
    w = partial_recovery_omega().edge_perspective()
    assert w.sum() == pytest.approx(1.0)
    assert w[0] == pytest.approx(0.05 / partial_recovery_omega().mean)


def test_log_binom_large():
    assert log_binom(20000, 50) == pytest.approx(
        sum(np.log(20000 - i) - np.log(i + 1) for i in range(50)), rel=1e-12)


def test_conditional_identity():
    d = fcc_table(2)
    c = conditional_distribution(d, 20000, 0)
    assert c.pmf[0] == 0.0
    assert c.tv_distance(d) < 1e-12


def test_conditional_hand_enumerated():
    # all 6 pairs over {0,1,2,3} with {0,1} known: 1 pair fully known, 4 half, 1 unknown
    c = conditional_distribution(DegreeDistribution({2: 1.0}), 4, 2)
    assert np.allclose(c.pmf, [1 / 6, 2 / 3, 1 / 6])


def test_conditional_rejects_all_known():
    with pytest.raises(ValueError):
        conditional_distribution(fcc_table(1), 10, 10)


def test_conditional_vs_stripping_monte_carlo(rng):
    # M=2 users of k=100, m=1 block known: strip a degree-Phi^(2) symbol's edges into it
    k = 100
    dist = fcc_table(2)
    degs = dist.sample(rng, 10**5)
    counts = np.zeros(dist.max_degree + 1)
    for d in degs:
        pick = rng.choice(2 * k, size=min(d, 2 * k), replace=False)
        counts[int((pick >= k).sum())] += 1
    emp = counts / counts.sum()
    assert conditional_distribution(dist, 2 * k, k).tv_distance(emp) < 0.01


def test_conditional_large_vs_monte_carlo(rng):
    dist = fcc_table(2)
    total, known = 20000, 10000
    degs = dist.sample(rng, 10**5)
    # neighbors without replacement from a huge pool: the number landing in the
    # unknown half is hypergeometric
    kept = rng.hypergeometric(total - known, known, degs)
    emp = np.bincount(kept, minlength=dist.max_degree + 1) / degs.size
    assert conditional_distribution(dist, total, known).tv_distance(emp) < 0.01


@settings(max_examples=60, deadline=None)
@given(total=st.integers(2, 10**5), frac=st.floats(0, 0.999),
       weights=st.lists(st.floats(0, 1), min_size=2, max_size=60))
def test_conditional_sums_to_one(total, frac, weights):
    w = np.array([0.0] + weights)
    if w.sum() <= 0:
        w[1] = 1.0
    dist = DegreeDistribution.from_weights(w)
    known = min(int(frac * total), total - 1)
    c = conditional_distribution(dist, total, known)
    assert isinstance(c, ConditionalDistribution)
    assert abs(c.pmf.sum() - 1.0) < 1e-10
    assert np.all(c.pmf >= 0)


@settings(max_examples=40, deadline=None)
@given(total=st.integers(1, 500), known_frac=st.floats(0, 1), D=st.integers(1, 40))
def test_hypergeom_rows_are_distributions(total, known_frac, D):
    known = int(known_frac * total)
    H = hypergeom_matrix(total, known, D)
    assert np.allclose(H.sum(axis=1), 1.0, atol=1e-9)
