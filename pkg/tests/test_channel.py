import numpy as np
import pytest

from raptorcoop.channel import (ErasureMatrix, StreamCollisionError, StreamRegistry, rng_stream,
                                survivors, transmit)


def test_transmit_extremes(rng):
    syms = list(range(100))
    assert transmit(syms, 0.0, rng) == syms
    assert transmit(syms, 1.0, rng) == []


def test_transmit_preserves_order(rng):
    out = transmit(list(range(1000)), 0.5, rng)
    assert out == sorted(out)


def test_survivor_fraction(rng):
    assert abs(survivors(10**6, 0.3, rng).mean() - 0.7) < 0.002


def test_bad_probability(rng):
    with pytest.raises(ValueError):
        survivors(5, 1.5, rng)


def test_stream_reproducible():
    a = rng_stream(7, (1, 2, 3)).random(1000)
    b = rng_stream(7, (1, 2, 3)).random(1000)
    assert np.array_equal(a, b)


def test_streams_uncorrelated():
    a = rng_stream(7, (0, 1, 2)).random(10**5)
    b = rng_stream(7, (1, 1, 2)).random(10**5)
    assert abs(np.corrcoef(a, b)[0, 1]) < 0.01


def test_link_erasures_independent():
    a = survivors(10**5, 0.4, rng_stream(3, (0, 1, 2, 0, 1))).astype(float)
    b = survivors(10**5, 0.4, rng_stream(3, (0, 1, 2, 0, 2))).astype(float)
    assert abs(np.corrcoef(a, b)[0, 1]) < 0.01


def test_collision_detection():
    reg = StreamRegistry(1)
    reg.stream(0, 1)
    with pytest.raises(StreamCollisionError):
        reg.stream(0, 1)


def test_erasure_matrix():
    em = ErasureMatrix.uniform([0.2, 0.6], 0.3)
    assert em.link(0, None) == 0.2 and em.link(1, 0) == 0.3
    with pytest.raises(ValueError):
        ErasureMatrix((0.1, 0.1), ((0.0, 0.2), (0.3, 0.0)))
