from itertools import permutations as iter_permutations

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from mallowsim.errors import ExcursionTooLong, ReturnTooLong
from mallowsim.perms import cycle_counts, make_permutation
from mallowsim.regen import (
    Excursion,
    SymmetricBlock,
    additive_cuts,
    antiadditive_cuts,
    chain_renewal_times,
    chain_step,
    covering_block_length,
    decompose_additive,
    decompose_antiadditive,
    excursion_lengths,
    occupation_distribution,
    pair_chain_return_times,
    sample_excursions,
    sample_symmetric_blocks,
)
from mallowsim.rng import RngStream
from mallowsim.sampler import geometric, sample_finite

# frozen q-series oracles at q = 1/2 (20-digit values, see test docstrings)
MEAN_EXCURSION = 3.4627466194550636  # 1 / (q;q)_inf
MEAN_PAIR_RETURN = 11.990614150547471  # 1 / (q;q)_inf^2

perms = st.integers(1, 24).flatmap(lambda n: st.permutations(list(range(1, n + 1))))


def test_chain_step_values():
    assert chain_step(0, 1) == 0
    assert chain_step(0, 4) == 3
    assert chain_step(2, 1) == 1
    assert chain_step(5, 3) == 4


def test_chain_renewal_times_small():
    # draws 1,1 keep the chain at zero; the draw of 3 starts a 3-step excursion
    assert chain_renewal_times([1, 1, 3, 1, 1]) == [1, 2, 5]


def test_cut_examples():
    assert additive_cuts(make_permutation([2, 1, 4, 3])) == [2, 4]
    assert additive_cuts(make_permutation([1, 2, 3])) == [1, 2, 3]
    assert additive_cuts(make_permutation([3, 1, 2])) == [3]
    assert antiadditive_cuts(make_permutation([4, 3, 2, 1])) == [1, 2]
    assert antiadditive_cuts(make_permutation([3, 4, 1, 2])) == [2]
    assert antiadditive_cuts(make_permutation([1, 2, 3])) == []


@given(perms)
@settings(max_examples=150)
def test_additive_roundtrip(values):
    w = make_permutation(values)
    d = decompose_additive(w)
    assert d.reassemble() == w


@given(perms)
@settings(max_examples=150)
def test_antiadditive_roundtrip(values):
    w = make_permutation(values)
    d = decompose_antiadditive(w)
    assert d.reassemble() == w


def test_roundtrips_exhaustive_n5():
    for values in iter_permutations(range(1, 6)):
        w = make_permutation(values)
        assert decompose_additive(w).reassemble() == w
        assert decompose_antiadditive(w).reassemble() == w


@given(perms)
@settings(max_examples=100)
def test_cycle_additivity_over_blocks(values):
    w = make_permutation(values)
    d = decompose_additive(w)
    merged = {}
    for exc in d.blocks:
        for size, mult in cycle_counts(exc.block).counts.items():
            merged[size] = merged.get(size, 0) + mult
    assert merged == dict(cycle_counts(w).counts)


def test_excursion_rejects_reducible_block():
    with pytest.raises(ValueError):
        Excursion(2, make_permutation([1, 2]))


def test_symmetric_pair_block_validation():
    # [2,1] swapped halves: positions 1..1 -> values 2..2 and back
    SymmetricBlock(2, make_permutation([2, 1]), kind="pair")
    with pytest.raises(ValueError):
        SymmetricBlock(2, make_permutation([1, 2]), kind="pair")
    with pytest.raises(ValueError):
        SymmetricBlock(3, make_permutation([2, 3, 1]), kind="pair")


def test_sampled_excursions_are_irreducible():
    blocks = sample_excursions(0.5, 200, RngStream(4))
    assert len(blocks) == 200
    for b in blocks:
        assert additive_cuts(b.block) == [b.length]


def test_excursion_lengths_match_blockwise_sampling():
    # same stream, two readers: lengths-only scan vs full block sampler
    lens_fast = excursion_lengths(0.5, 500, RngStream(17, 3))
    blocks = sample_excursions(0.5, 500, RngStream(17, 3))
    assert lens_fast.tolist() == [b.length for b in blocks]


def test_excursion_lengths_chunking_is_exact():
    # scalar reference loop over the same geometric draw stream
    def naive(q, count, rng, chunk=1 << 16):
        lengths, last_zero, t0, m = [], 0, 0, 0
        while True:
            z = geometric(q, rng, size=chunk)
            for i in range(chunk):
                m = chain_step(m, int(z[i]))
                if m == 0:
                    lengths.append(t0 + i + 1 - last_zero)
                    last_zero = t0 + i + 1
                    if len(lengths) == count:
                        return np.array(lengths)
            t0 += chunk
        return None

    got = excursion_lengths(0.5, 20_000, RngStream(42, 41))
    assert np.array_equal(got, naive(0.5, 20_000, RngStream(42, 41)))


def test_excursion_length_law():
    lens = excursion_lengths(0.5, 100_000, RngStream(8))
    se = lens.std(ddof=1) / np.sqrt(lens.shape[0])
    assert abs(lens.mean() - MEAN_EXCURSION) < 4 * se
    # immediate renewal happens exactly when the draw is 1: P = 1 - q
    p1 = float(np.mean(lens == 1))
    assert abs(p1 - 0.5) < 0.006


def test_excursion_cap():
    with pytest.raises(ExcursionTooLong):
        excursion_lengths(0.95, 10_000, RngStream(0), max_steps=25)


def test_occupation_matches_stationary_mass():
    occ = occupation_distribution(0.5, 400_000, RngStream(2), burn_in=2_000)
    assert occ.sum() == pytest.approx(1.0, abs=1e-12)
    # state-0 mass is the renewal rate 1/E(T)
    assert abs(occ[0] - 1.0 / MEAN_EXCURSION) < 0.005


def test_pair_return_law():
    rets = pair_chain_return_times(0.5, 100_000, RngStream(9))
    se = rets.std(ddof=1) / np.sqrt(rets.shape[0])
    assert abs(rets.mean() - MEAN_PAIR_RETURN) < 4 * se
    # both coordinates renew at once: P = (1 - q)^2
    p1 = float(np.mean(rets == 1))
    assert abs(p1 - 0.25) < 0.006


def test_pair_return_cap():
    with pytest.raises(ReturnTooLong):
        pair_chain_return_times(0.9, 10_000, RngStream(0), max_steps=30)


def test_covering_block_reports():
    rep = covering_block_length(0.5, 200, 500, RngStream(13))
    assert rep.count == 500
    assert rep.value > MEAN_EXCURSION  # length-biased, so above the plain mean
    assert rep.extra["q"] == 0.5 and rep.extra["n"] == 200


def test_symmetric_blocks_even_cycles_only():
    blocks = sample_symmetric_blocks(2.0, 101, 40, RngStream(6))
    assert any(b.kind == "pair" for b in blocks)
    for b in blocks:
        if b.kind == "pair":
            assert b.length % 2 == 0
            assert all(size % 2 == 0 for size in cycle_counts(b.block).counts)
        else:
            assert b.kind == "central"
            assert b.parity in ("even", "odd")


def test_symmetric_blocks_require_high_q():
    with pytest.raises(ValueError):
        sample_symmetric_blocks(0.5, 101, 10, RngStream(0))
