import numpy as np
import pytest

from mallowsim.errors import BadStatistic
from mallowsim.harness import (
    chi_square_vs_exact,
    clt_check,
    cycle_stat_samples,
    lex_index_batch,
    mean_variance_scaling,
    parity_limit_check,
    parse_statistic,
    shape_report,
    size_bias_convergence,
)
from mallowsim.parallel import pool_context
from mallowsim.perms import _lex_index
from mallowsim.report import EstimateReport, batch_se, mean_report, tv_distance
from mallowsim.rng import RngStream


def test_parse_statistic():
    assert parse_statistic("C") == ("C", None)
    assert parse_statistic("C1") == ("C1", 1)
    assert parse_statistic("C12") == ("C12", 12)
    for bad in ("", "D3", "C0", "C-1", "Cx", "c1"):
        with pytest.raises(BadStatistic):
            parse_statistic(bad)


def test_shape_report_normal_vs_exponential():
    gen = RngStream(0).generator
    ok = shape_report("normal", gen.standard_normal(5_000))
    assert ok.valid and ok.passed
    bad = shape_report("expo", gen.exponential(1.0, 5_000))
    assert bad.valid and not bad.passed


def test_shape_report_too_few_reps():
    gen = RngStream(1).generator
    rep = shape_report("tiny", gen.standard_normal(200))
    assert not rep.valid
    assert not rep.passed


def test_shape_report_constant_sample():
    rep = shape_report("flat", np.ones(2_000))
    assert not rep.passed


def test_cycle_stat_samples_shape_and_mean():
    out = cycle_stat_samples(0.5, 5, 40_000, ["C1", "C"], RngStream(2))
    assert out.shape == (40_000, 2)
    se = out[:, 0].std(ddof=1) / 200.0
    assert abs(out[:, 0].mean() - 311.0 / 155.0) < 4 * se  # exact n=5 oracle


def test_cycle_stat_samples_worker_independence():
    serial = cycle_stat_samples(2.0, 30, 4_000, ["C2"], RngStream(3))
    with pool_context(2) as pool:
        pooled = cycle_stat_samples(2.0, 30, 4_000, ["C2"], RngStream(3), pool)
    assert np.array_equal(serial, pooled)


def test_clt_check_rejects_odd_stat_high_q():
    with pytest.raises(BadStatistic):
        clt_check(2.0, 100, 1_200, ["C1"], RngStream(0))


def test_clt_check_small_run_reports():
    rep = clt_check(0.5, 200, 1_500, ["C", "C1"], RngStream(4))
    assert set(rep.reports) == {"C", "C1"}
    assert rep.cov_over_n.shape == (2, 2)
    d = rep.to_dict()
    assert d["n"] == 200 and d["reps"] == 1_500


def test_scaling_report():
    rep = mean_variance_scaling(0.5, [50, 100, 200], 800, "C1", RngStream(5))
    ns = [r.n for r in rep.rows]
    assert ns == [50, 100, 200]
    for row in rep.rows:
        assert row.mean_se > 0
        assert 0.1 < row.mean_over_n < 0.4  # near the 0.2206 density
    assert rep.stabilized


def test_parity_check_structure():
    rep = parity_limit_check(2.0, 60, 4_000, RngStream(6), num_odd_sizes=2)
    assert rep.same_parity.n_a == 60 and rep.same_parity.n_b == 62
    assert rep.cross_parity.n_b == 61
    assert 0.0 <= rep.same_parity.max_tv <= 1.0
    # same-parity laws are close; cross-parity differs by a fixed point
    assert rep.same_parity.max_tv < rep.cross_parity.max_tv


def test_size_bias_convergence_smoke():
    rep = size_bias_convergence(0.5, [40, 160], 400, RngStream(7), ref_samples=50_000)
    assert len(rep.rows) == 2
    assert rep.reference.value > 0
    assert rep.rows[-1].n == 160


def test_chi_square_vs_exact():
    res = chi_square_vs_exact(0.5, 3, 60_000, RngStream(8))
    assert res["df"] == 5
    assert res["p_value"] > 1e-3
    assert res["min_expected"] > 5


def test_lex_index_batch_matches_reference():
    from itertools import permutations

    rows = np.array(list(permutations(range(1, 5))), dtype=np.int64)
    got = lex_index_batch(rows)
    want = [_lex_index(tuple(int(v) for v in row)) for row in rows]
    assert got.tolist() == want == list(range(24))


def test_mean_report_and_within():
    rep = mean_report("demo", np.array([1.0, 2.0, 3.0, 4.0]))
    assert rep.value == 2.5
    assert rep.count == 4
    assert rep.within(2.5, sigmas=1)
    assert not rep.within(99.0, sigmas=3)


def test_batch_se_positive():
    gen = RngStream(9).generator
    x = gen.standard_normal(10_000)
    se = batch_se(x, nbatches=50)
    assert 0.005 < se < 0.02  # near iid value 0.01


def test_tv_distance():
    assert tv_distance({0: 0.5, 1: 0.5}, {0: 0.5, 1: 0.5}) == 0.0
    assert tv_distance({0: 1.0}, {1: 1.0}) == 1.0
    assert tv_distance({0: 0.75, 1: 0.25}, {0: 0.25, 1: 0.75}) == pytest.approx(0.5)


def test_estimate_report_roundtrip():
    rep = EstimateReport(name="x", value=1.0, se=0.1, count=10)
    d = rep.to_dict()
    assert d["name"] == "x" and d["se"] == 0.1
