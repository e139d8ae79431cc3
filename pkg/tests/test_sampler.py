import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from mallowsim.errors import BadParameter, TooLarge
from mallowsim.perms import exact_distribution, inversions, make_permutation
from mallowsim.rng import RngStream
from mallowsim.sampler import (
    driving_draws,
    geometric,
    sample_finite,
    sample_finite_batch,
    sample_process_prefix,
    values_from_draws,
)
from mallowsim.regen import chain_renewal_times


def test_geometric_support_and_mean():
    rng = RngStream(0)
    draws = geometric(0.5, rng, size=200_000)
    assert draws.min() >= 1
    # mean of the ratio-0.5 law started at 1 is 2
    assert abs(draws.mean() - 2.0) < 0.02


def test_geometric_rejects_bad_ratio():
    with pytest.raises(BadParameter):
        geometric(0.0, RngStream(0))
    with pytest.raises(BadParameter):
        geometric(1.0, RngStream(0))


def test_degenerate_limits():
    rng = RngStream(3)
    low = sample_finite(8, 1e-9, rng)
    assert low.image == tuple(range(1, 9))
    high = sample_finite(8, 1e9, rng)
    assert high.image == tuple(range(8, 0, -1))


def test_sample_finite_is_valid_and_deterministic():
    a = sample_finite(50, 0.7, RngStream(11))
    b = sample_finite(50, 0.7, RngStream(11))
    c = sample_finite(50, 0.7, RngStream(12))
    assert a == b
    assert a != c
    assert sorted(a.image) == list(range(1, 51))


def test_batch_shape_and_validity():
    out = sample_finite_batch(20, 2.0, 64, RngStream(5))
    assert out.shape == (64, 20)
    assert out.dtype == np.int64
    for row in out[:8]:
        assert sorted(row.tolist()) == list(range(1, 21))


def test_batch_cap():
    with pytest.raises(TooLarge):
        sample_finite_batch(1 << 20, 0.5, 1 << 20, RngStream(0))


def test_batch_agrees_with_exact_law():
    # mean inversions at n=4, q=0.5 against the enumeration oracle
    dist = exact_distribution(4, 0.5)
    target = dist.expectation_of(dist.inversion_counts)
    rows = sample_finite_batch(4, 0.5, 200_000, RngStream(21))
    inv = np.zeros(rows.shape[0])
    for i in range(4):
        for j in range(i + 1, 4):
            inv += rows[:, i] > rows[:, j]
    se = inv.std(ddof=1) / np.sqrt(rows.shape[0])
    assert abs(inv.mean() - target) < 4 * se


@given(st.integers(0, 10_000), st.integers(2, 120))
@settings(max_examples=30, deadline=None)
def test_prefix_roundtrip(seed, t):
    prefix = sample_process_prefix(0.5, t, RngStream(seed, 9))
    assert len(prefix.values) == t
    draws = driving_draws(prefix.values)
    assert values_from_draws(draws) == tuple(prefix.values)


@given(st.integers(0, 10_000))
@settings(max_examples=25, deadline=None)
def test_prefix_renewals_are_chain_zeros(seed):
    prefix = sample_process_prefix(0.4, 300, RngStream(seed, 10))
    draws = driving_draws(prefix.values)
    assert chain_renewal_times(list(draws)) == list(prefix.renewal_times())


def test_prefix_pattern_is_permutation():
    prefix = sample_process_prefix(0.6, 40, RngStream(1))
    pat = prefix.pattern()
    assert sorted(pat.image) == list(range(1, 41))


def test_rng_child_streams_differ():
    root = RngStream(99)
    a = root.child(0).uniform(size=4)
    b = root.child(1).uniform(size=4)
    assert not np.allclose(a, b)
    # same child twice is identical
    c = RngStream(99).child(0).uniform(size=4)
    assert np.array_equal(a, c)
