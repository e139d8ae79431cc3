import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from mallowsim.errors import DuplicateValue, NotABijection, TooLarge
from mallowsim.perms import (
    CycleCounts,
    Permutation,
    cycle_count_statistic,
    cycle_counts,
    exact_distribution,
    exact_expectation,
    identity,
    insertion_ranks,
    inversions,
    log_mallows_normalizer,
    make_permutation,
    mallows_normalizer,
    relative_order,
    reverse,
    total_cycles_statistic,
)

perms = st.integers(1, 60).flatmap(lambda n: st.permutations(list(range(1, n + 1))))


def brute_inversions(values):
    n = len(values)
    return sum(
        1 for i in range(n) for j in range(i + 1, n) if values[i] > values[j]
    )


def test_identity_and_validation():
    w = identity(4)
    assert w.image == (1, 2, 3, 4)
    assert inversions(w) == 0
    with pytest.raises(NotABijection):
        make_permutation([1, 1, 3])
    with pytest.raises(NotABijection):
        make_permutation([0, 1, 2])
    with pytest.raises(NotABijection):
        Permutation(3, (1, 2))


def test_call_and_inverse():
    w = make_permutation([3, 1, 2])
    assert [w(i) for i in (1, 2, 3)] == [3, 1, 2]
    v = w.inverse()
    assert [v(w(i)) for i in (1, 2, 3)] == [1, 2, 3]


@given(perms)
@settings(max_examples=150)
def test_inversions_matches_bruteforce(values):
    assert inversions(make_permutation(values)) == brute_inversions(values)


@given(perms)
@settings(max_examples=150)
def test_reverse_is_involution_and_complements_inversions(values):
    w = make_permutation(values)
    r = reverse(w)
    assert reverse(r) == w
    n = w.n
    assert inversions(w) + inversions(r) == n * (n - 1) // 2


@given(perms)
@settings(max_examples=100)
def test_cycle_counts_mass(values):
    cc = cycle_counts(make_permutation(values))
    assert sum(size * mult for size, mult in cc.counts.items()) == len(values)
    assert cc.total == sum(cc.counts.values())


def test_cycle_counts_example():
    # 2,1 swap + fixed point + 3-cycle
    w = make_permutation([2, 1, 3, 5, 6, 4])
    cc = cycle_counts(w)
    assert cc.counts == {1: 1, 2: 1, 3: 1}
    assert cc.count_of(4) == 0
    assert list(cc.as_vector(4)) == [1, 1, 1, 0]


def test_cycle_counts_validation():
    with pytest.raises(ValueError):
        CycleCounts(5, {2: 2})  # mass 4 != 5


def test_relative_order():
    assert relative_order([3.2, -1.0, 0.5]).image == (3, 1, 2)
    with pytest.raises(DuplicateValue):
        relative_order([1.0, 1.0])


@given(perms)
@settings(max_examples=100)
def test_insertion_ranks_sum_to_inversions(values):
    w = make_permutation(values)
    ranks = insertion_ranks(w)
    assert all(1 <= r <= w.n - i for i, r in enumerate(ranks))
    assert sum(r - 1 for r in ranks) == inversions(w)


def test_normalizer_values():
    assert mallows_normalizer(3, 2.0) == 21.0
    assert mallows_normalizer(5, 0.5) == 9.5361328125
    assert mallows_normalizer(1, 0.3) == 1.0
    # q=1 degenerates to n!
    assert mallows_normalizer(4, 1.0) == 24.0


@given(st.integers(1, 40), st.floats(0.05, 4.0))
@settings(max_examples=80)
def test_log_normalizer_consistent(n, q):
    direct = mallows_normalizer(n, q)
    if math.isinf(direct):
        assert log_mallows_normalizer(n, q) > 700.0
    else:
        assert math.isclose(
            log_mallows_normalizer(n, q), math.log(direct), rel_tol=1e-10, abs_tol=1e-12
        )


def test_exact_distribution_basics():
    dist = exact_distribution(3, 2.0)
    assert len(dist.images) == 6
    assert dist.total_mass() == pytest.approx(1.0, abs=1e-14)
    # P(identity) = 1/Z, P(reversal) = q^3/Z
    assert dist.probability((1, 2, 3)) == pytest.approx(1 / 21.0, abs=1e-14)
    assert dist.probability((3, 2, 1)) == pytest.approx(8 / 21.0, abs=1e-14)


def test_exact_distribution_mass_small_n():
    for n in range(1, 8):
        for q in (0.3, 0.7, 1.6):
            assert exact_distribution(n, q).total_mass() == pytest.approx(
                1.0, abs=1e-12
            )


def test_exact_expectation_oracles():
    # fixed points at n=2: closed form 2/(1+q)
    for q in (0.1, 0.5, 1.0, 2.0, 3.0):
        got = exact_expectation(2, q, cycle_count_statistic(1))
        assert abs(got - 2.0 / (1.0 + q)) < 1e-12
    # rational-arithmetic enumeration oracles
    assert exact_expectation(5, 0.5, cycle_count_statistic(1)) == pytest.approx(
        311.0 / 155.0, abs=1e-12
    )
    assert exact_expectation(6, 2.0, cycle_count_statistic(2)) == pytest.approx(
        1226.0 / 1519.0, abs=1e-12
    )


def test_exact_expectation_total_cycles_n1():
    assert exact_expectation(1, 0.5, total_cycles_statistic()) == 1.0


def test_enumeration_cap():
    with pytest.raises(TooLarge):
        exact_distribution(10, 0.5)


def test_exact_csv_roundtrip(tmp_path):
    dist = exact_distribution(3, 0.5)
    path = tmp_path / "table.csv"
    dist.write_csv(path)
    lines = path.read_text().strip().splitlines()
    assert lines[0] == "permutation,inversions,probability"
    assert len(lines) == 7
    total = sum(float(line.rsplit(",", 1)[1]) for line in lines[1:])
    assert total == pytest.approx(1.0, abs=1e-12)
