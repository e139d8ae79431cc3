import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from mallowsim.constants import (
    alpha1,
    estimate_renewal_constants,
    estimate_symmetric_constants,
    q_pochhammer,
    stationary_mu,
)
from mallowsim.errors import BadParameter, Diverges
from mallowsim.rng import RngStream

# 20-digit reference values computed with 40-digit arithmetic
QP_HALF = 0.28878809508660242128  # (q;q)_inf at q = 1/2
ALPHA1_HALF = 0.22064303609653285185
MU2_HALF = 0.19252539672440161419


def test_q_pochhammer_finite():
    # (a;q)_3 = (1-a)(1-aq)(1-aq^2)
    got = q_pochhammer(0.3, 0.5, terms=3)
    assert got.value == pytest.approx((1 - 0.3) * (1 - 0.15) * (1 - 0.075), abs=1e-15)
    assert got.truncation_bound == 0.0


def test_q_pochhammer_infinite():
    got = q_pochhammer(0.5, 0.5)
    assert abs(got.value - QP_HALF) < 1e-13
    assert got.truncation_bound < 1e-13
    assert got.terms_used > 10


def test_q_pochhammer_divergence():
    with pytest.raises(Diverges):
        q_pochhammer(0.5, 1.5)


def test_stationary_mu_oracle_values():
    mu = stationary_mu(0.5)
    assert abs(mu[0] - QP_HALF) < 1e-12
    assert abs(mu[1] - QP_HALF) < 1e-12  # mu_1 = mu_0 at q = 1/2
    assert abs(mu[2] - MU2_HALF) < 1e-12


@given(st.floats(0.05, 0.9))
@settings(max_examples=40)
def test_stationary_mu_sums_to_one(q):
    assert stationary_mu(q).sum() == pytest.approx(1.0, abs=1e-9)


def test_stationary_mu_rejects_high_q():
    with pytest.raises(BadParameter):
        stationary_mu(1.5)


def test_alpha1_oracle_value():
    got = alpha1(0.5)
    assert abs(got.value - ALPHA1_HALF) < 1e-13
    assert got.truncation_bound < 1e-13


def test_alpha1_small_q_limit():
    # as q -> 0 only fixed points survive, one renewal per step
    assert alpha1(1e-6).value == pytest.approx(1.0, abs=1e-5)


def test_renewal_constants_estimate():
    rep = estimate_renewal_constants(0.5, 20_000, RngStream(3), i_max=6)
    assert rep.kind == "renewal"
    assert rep.cycle_sizes == (1, 2, 3, 4, 5, 6)
    se_mu = rep.standard_errors["mu"]
    assert abs(rep.mu - 1.0 / QP_HALF) < 4 * se_mu
    se_a1 = rep.standard_errors["alpha"][0]
    assert abs(rep.alpha[0] - ALPHA1_HALF) < 4 * se_a1
    beta = np.asarray(rep.beta)
    assert np.allclose(beta, beta.T)
    # per-step cycle mass: tracked sizes plus the pooled tail account for
    # every position, so the two shares sum to exactly one
    head = sum(s * a for s, a in zip(rep.cycle_sizes, rep.alpha))
    assert head + rep.tail_length_fraction == pytest.approx(1.0, abs=1e-9)


def test_symmetric_constants_estimate():
    rep = estimate_symmetric_constants(2.0, 4_000, RngStream(5), i_max=4, ambient=401)
    assert rep.kind == "symmetric"
    assert rep.cycle_sizes == (2, 4, 6, 8)
    assert rep.mu > 2.0  # pair blocks have even length >= 2
    assert rep.alpha[0] > 0
    assert rep.sample_count == 4_000


def test_constants_report_serializes():
    rep = estimate_renewal_constants(0.5, 2_000, RngStream(1), i_max=3)
    blob = json.dumps(rep.to_json_dict())
    back = json.loads(blob)
    assert back["kind"] == "renewal"
    assert len(back["alpha"]) == 3
    assert back["sample_count"] == 2_000


def test_renewal_estimate_worker_independence():
    from mallowsim.parallel import pool_context

    a = estimate_renewal_constants(0.5, 30_000, RngStream(7), i_max=4)
    with pool_context(2) as pool:
        b = estimate_renewal_constants(
            0.5, 30_000, RngStream(7), i_max=4, pool=pool, worker_count=2
        )
    assert a.mu == b.mu
    assert np.array_equal(a.alpha, b.alpha)
    assert np.array_equal(a.beta, b.beta)
