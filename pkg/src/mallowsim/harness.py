"""Empirical verification harness: CLT shape checks, scaling tables, parity
comparisons, and goodness-of-fit against the exact small-n oracle.

All Monte Carlo entry points take an :class:`RngStream` and an optional
process pool; work is pre-partitioned (see :mod:`mallowsim.parallel`) so
results do not depend on the worker count.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
from scipy import stats as sps

from ._kernels import cycle_lengths_reps, cycle_stats_batch
from .errors import BadParameter, BadStatistic
from .parallel import REPS_PER_PART, partition_counts, run_partitioned
from .perms import exact_distribution
from .report import EstimateReport, batch_statistic_se, combined_se, tv_distance
from .rng import RngStream
from .sampler import sample_finite_batch

#: shape thresholds for declaring a sampled statistic "normal enough"
DEFAULT_SHAPE_THRESHOLDS = {
    "skewness": 0.1,
    "excess_kurtosis": 0.2,
    "ks_statistic": 0.02,
}

#: minimum sample size at which the shape flags mean anything
MIN_SHAPE_REPS = 1000


def parse_statistic(token: str):
    """Map a token like "C" or "C3" to (label, cycle size or None for total)."""
    token = token.strip()
    if token == "C":
        return ("C", None)
    if token.startswith("C") and token[1:].isdigit():
        size = int(token[1:])
        if size >= 1:
            return (token, size)
    raise BadStatistic(
        f"unknown statistic {token!r}; expected 'C' or 'C<k>' with k >= 1"
    )


def parse_statistics(tokens: Sequence[str]) -> list:
    if not tokens:
        raise BadStatistic("need at least one statistic")
    return [parse_statistic(t) for t in tokens]


def _cycle_table_worker(args) -> np.ndarray:
    """Per-rep cycle-count table for one partition: (count, i_max + 1) int64."""
    q, n, count, stream, i_max = args
    out = np.empty((count, i_max + 1), dtype=np.int64)
    rows_per = max(1, (1 << 22) // max(n, 1))
    done = 0
    while done < count:
        rows = min(rows_per, count - done)
        batch = sample_finite_batch(n, q, rows, stream)
        out[done : done + rows] = cycle_stats_batch(batch, i_max)
        done += rows
    return out


def cycle_stat_samples(
    q: float,
    n: int,
    reps: int,
    statistics: Sequence[str],
    rng: RngStream,
    pool=None,
) -> np.ndarray:
    """Monte Carlo matrix of cycle statistics: one row per sample.

    Columns follow ``statistics`` ("C" for the total number of cycles, "Ck"
    for the count of k-cycles).
    """
    specs = parse_statistics(statistics)
    if n < 1 or reps < 1:
        raise BadParameter("n and reps must be positive")
    i_max = max([s or 1 for _, s in specs])
    parts = partition_counts(reps, REPS_PER_PART)
    args = [(q, n, c, rng.child(i), i_max) for i, c in enumerate(parts)]
    table = np.vstack(run_partitioned(_cycle_table_worker, args, pool))
    cols = [0 if size is None else size for _, size in specs]
    return table[:, cols].astype(np.float64)


@dataclass(frozen=True)
class NormalityReport:
    """Distribution-shape summary of one sampled statistic.

    ``passed`` means all three shape measures are inside their thresholds;
    ``valid`` warns when the sample is too small for the flags to be
    meaningful.
    """

    name: str
    count: int
    mean: float
    variance: float
    skewness: float
    excess_kurtosis: float
    ks_statistic: float
    thresholds: dict = field(default_factory=lambda: dict(DEFAULT_SHAPE_THRESHOLDS))

    @property
    def valid(self) -> bool:
        return self.count >= MIN_SHAPE_REPS

    @property
    def passed(self) -> bool:
        return (
            self.valid
            and abs(self.skewness) < self.thresholds["skewness"]
            and abs(self.excess_kurtosis) < self.thresholds["excess_kurtosis"]
            and self.ks_statistic < self.thresholds["ks_statistic"]
        )

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "count": self.count,
            "mean": self.mean,
            "variance": self.variance,
            "skewness": self.skewness,
            "excess_kurtosis": self.excess_kurtosis,
            "ks_statistic": self.ks_statistic,
            "thresholds": dict(self.thresholds),
            "valid": self.valid,
            "passed": self.passed,
        }


def shape_report(
    name: str, samples: np.ndarray, thresholds: Optional[dict] = None
) -> NormalityReport:
    """Skewness, excess kurtosis and KS distance to a fitted normal."""
    x = np.asarray(samples, dtype=np.float64)
    if x.shape[0] < 3:
        raise BadParameter("need at least 3 samples for a shape report")
    mean = float(np.mean(x))
    var = float(np.var(x, ddof=1))
    sd = math.sqrt(var)
    if sd == 0.0:
        ks = 1.0
        skew = kurt = float("inf")
    else:
        z = (x - mean) / sd
        skew = float(sps.skew(z))
        kurt = float(sps.kurtosis(z, fisher=True))
        ks = float(sps.kstest(z, "norm").statistic)
    return NormalityReport(
        name,
        x.shape[0],
        mean,
        var,
        skew,
        kurt,
        ks,
        dict(thresholds or DEFAULT_SHAPE_THRESHOLDS),
    )


@dataclass(frozen=True)
class CltReport:
    """Joint normality report for several cycle statistics at one (q, n)."""

    q: float
    n: int
    reps: int
    names: tuple
    reports: dict
    cov_over_n: np.ndarray
    cov_over_n_se: np.ndarray
    seed: int

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.reports.values())

    def to_dict(self) -> dict:
        return {
            "q": self.q,
            "n": self.n,
            "reps": self.reps,
            "names": list(self.names),
            "reports": {k: v.to_dict() for k, v in self.reports.items()},
            "cov_over_n": [[float(v) for v in row] for row in self.cov_over_n],
            "cov_over_n_se": [[float(v) for v in row] for row in self.cov_over_n_se],
            "seed": self.seed,
            "passed": self.passed,
        }


def _admissible_for_clt(q: float, specs) -> None:
    if q > 1.0:
        for name, size in specs:
            if size is not None and size % 2 == 1:
                raise BadStatistic(
                    f"{name}: odd cycle sizes have no CLT for q > 1; "
                    "use even sizes or the total count C"
                )


def clt_check(
    q: float,
    n: int,
    reps: int,
    statistics: Sequence[str],
    rng: RngStream,
    pool=None,
) -> CltReport:
    """Sample the statistics and test each marginal for normality.

    Also estimates the covariance matrix scaled by 1/n (with batch SEs),
    which downstream checks compare against block-level predictions.  For
    q > 1, odd cycle sizes are rejected: their counts stay bounded and no
    normal limit exists.
    """
    specs = parse_statistics(statistics)
    _admissible_for_clt(q, specs)
    samples = cycle_stat_samples(q, n, reps, statistics, rng, pool)
    names = tuple(name for name, _ in specs)
    reports = {
        name: shape_report(name, samples[:, j]) for j, name in enumerate(names)
    }
    if len(names) > 1:
        cov = np.cov(samples.T, ddof=1) / n
        cov_se = batch_statistic_se(samples, lambda p: np.cov(p.T, ddof=1) / n)
    else:
        cov = np.array([[float(np.var(samples[:, 0], ddof=1)) / n]])
        cov_se = batch_statistic_se(
            samples, lambda p: np.array([[np.var(p[:, 0], ddof=1) / n]])
        )
    return CltReport(
        q, n, reps, names, reports, cov, np.asarray(cov_se), rng.seed
    )


@dataclass(frozen=True)
class ScalingRow:
    n: int
    reps: int
    mean: float
    mean_se: float
    variance: float
    variance_se: float

    @property
    def mean_over_n(self) -> float:
        return self.mean / self.n

    @property
    def variance_over_n(self) -> float:
        return self.variance / self.n

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "reps": self.reps,
            "mean": self.mean,
            "mean_se": self.mean_se,
            "variance": self.variance,
            "variance_se": self.variance_se,
            "mean_over_n": self.mean_over_n,
            "variance_over_n": self.variance_over_n,
        }


@dataclass(frozen=True)
class ScalingReport:
    """Mean/variance of one statistic across a ladder of sizes.

    ``normalized`` says whether the stabilisation flags look at mean/n and
    var/n (CLT-scaled statistics) or at the raw mean and variance (bounded
    statistics, e.g. odd cycles at q > 1).
    """

    q: float
    statistic: str
    rows: tuple
    normalized: bool
    seed: int

    def _series(self):
        if self.normalized:
            return [
                (r.mean_over_n, r.mean_se / r.n, r.variance_over_n, r.variance_se / r.n)
                for r in self.rows
            ]
        return [(r.mean, r.mean_se, r.variance, r.variance_se) for r in self.rows]

    @property
    def stabilized(self) -> bool:
        """Largest two sizes agree within 3 combined SE (mean and variance)."""
        if len(self.rows) < 2:
            return True
        s = self._series()
        (m1, mse1, v1, vse1), (m2, mse2, v2, vse2) = s[-2], s[-1]
        return abs(m2 - m1) <= 3 * combined_se(mse1, mse2) and abs(
            v2 - v1
        ) <= 3 * combined_se(vse1, vse2)

    def to_dict(self) -> dict:
        return {
            "q": self.q,
            "statistic": self.statistic,
            "normalized": self.normalized,
            "rows": [r.to_dict() for r in self.rows],
            "stabilized": self.stabilized,
            "seed": self.seed,
        }


def mean_variance_scaling(
    q: float,
    sizes: Sequence[int],
    reps: int,
    statistic: str,
    rng: RngStream,
    pool=None,
    normalized: Optional[bool] = None,
) -> ScalingReport:
    """Estimate mean and variance of one statistic at each size in ``sizes``.

    ``normalized=None`` picks per-position scaling automatically: on for q < 1
    or even sizes / total count (those grow linearly), off for odd sizes at
    q > 1 (bounded limits).
    """
    name, size = parse_statistic(statistic)
    sizes = [int(s) for s in sizes]
    if normalized is None:
        normalized = not (q > 1.0 and size is not None and size % 2 == 1)
    rows = []
    for j, n in enumerate(sorted(sizes)):
        samples = cycle_stat_samples(q, n, reps, [statistic], rng.child(j), pool)[:, 0]
        mean = float(np.mean(samples))
        var = float(np.var(samples, ddof=1))
        mean_se = math.sqrt(var / len(samples))
        var_se = float(
            batch_statistic_se(samples, lambda p: np.var(p, ddof=1))
        )
        rows.append(ScalingRow(n, reps, mean, mean_se, var, var_se))
    return ScalingReport(q, name, tuple(rows), normalized, rng.seed)


def _counts_pmf(values: np.ndarray, cap: int) -> dict:
    """Empirical pmf of small counts, pooling everything above ``cap``."""
    clipped = np.minimum(values, cap)
    freq = np.bincount(clipped.astype(np.int64), minlength=cap + 1) / len(values)
    return {int(k): float(v) for k, v in enumerate(freq)}


@dataclass(frozen=True)
class ParityComparison:
    n_a: int
    n_b: int
    tv_by_size: dict
    pmfs_a: dict
    pmfs_b: dict

    @property
    def max_tv(self) -> float:
        return max(self.tv_by_size.values())

    def to_dict(self) -> dict:
        return {
            "n_a": self.n_a,
            "n_b": self.n_b,
            "tv_by_size": {str(k): v for k, v in self.tv_by_size.items()},
            "max_tv": self.max_tv,
            "pmfs_a": {str(k): v for k, v in self.pmfs_a.items()},
            "pmfs_b": {str(k): v for k, v in self.pmfs_b.items()},
        }


@dataclass(frozen=True)
class ParityReport:
    """Odd-cycle count laws at sizes n, n+1, n+2 for q > 1.

    The laws at n and n+2 (same parity) should agree up to Monte Carlo noise;
    n and n+1 generally differ: odd-cycle counts feel the parity of the
    ambient size even as n grows.
    """

    q: float
    n: int
    reps: int
    odd_sizes: tuple
    count_cap: int
    same_parity: ParityComparison
    cross_parity: ParityComparison
    seed: int

    def to_dict(self) -> dict:
        return {
            "q": self.q,
            "n": self.n,
            "reps": self.reps,
            "odd_sizes": list(self.odd_sizes),
            "count_cap": self.count_cap,
            "same_parity": self.same_parity.to_dict(),
            "cross_parity": self.cross_parity.to_dict(),
            "seed": self.seed,
        }


def parity_limit_check(
    q: float,
    n: int,
    reps: int,
    rng: RngStream,
    num_odd_sizes: int = 3,
    count_cap: int = 10,
    pool=None,
) -> ParityReport:
    """Compare odd-cycle count distributions at sizes n, n+1, n+2 (q > 1)."""
    if q <= 1.0:
        raise BadParameter("parity effects concern q > 1")
    if num_odd_sizes < 1:
        raise BadParameter("need at least one odd size")
    odd_sizes = tuple(2 * i + 1 for i in range(num_odd_sizes))
    tokens = [f"C{s}" for s in odd_sizes]
    per_size = {}
    for j, m in enumerate((n, n + 1, n + 2)):
        cols = cycle_stat_samples(q, m, reps, tokens, rng.child(j), pool)
        per_size[m] = {
            s: _counts_pmf(cols[:, i], count_cap) for i, s in enumerate(odd_sizes)
        }

    def compare(a, b):
        return ParityComparison(
            a,
            b,
            {s: tv_distance(per_size[a][s], per_size[b][s]) for s in odd_sizes},
            per_size[a],
            per_size[b],
        )

    return ParityReport(
        q,
        n,
        reps,
        odd_sizes,
        count_cap,
        compare(n, n + 2),
        compare(n, n + 1),
        rng.seed,
    )


def _central_counts_worker(args) -> np.ndarray:
    """Counts of ``size``-cycles in the central block, one entry per sample."""
    q, reps, stream, ambient, size = args
    n = ambient
    out = np.empty(reps, dtype=np.int64)
    rows_per = max(1, (1 << 21) // max(n, 1))
    done = 0
    while done < reps:
        rows = min(rows_per, reps - done)
        batch = sample_finite_batch(n, q, rows, stream)
        for r in range(rows):
            arr = batch[r]
            half = n // 2
            if half:
                ks = np.arange(1, half + 1, dtype=np.int64)
                pmin = np.minimum.accumulate(arr[:half])
                smax = np.maximum.accumulate(arr[::-1][:half])
                cuts = ks[(pmin == n - ks + 1) & (smax == ks)]
            else:
                cuts = np.empty(0, dtype=np.int64)
            lengths, anchors = cycle_lengths_reps(arr)
            depth = np.minimum(anchors, n + 1 - anchors)
            central = depth > (int(cuts[-1]) if cuts.shape[0] else 0)
            out[done + r] = int(np.count_nonzero(central & (lengths == size)))
        done += rows
    return out


def central_block_cycle_pmf(
    q: float,
    ambient: int,
    reps: int,
    size: int,
    rng: RngStream,
    count_cap: int = 10,
    pool=None,
) -> dict:
    """Empirical pmf of the number of ``size``-cycles in the central block.

    The central block is the innermost part of the symmetric decomposition of
    a size-``ambient`` sample (q > 1); its law depends on the parity of
    ``ambient`` but not otherwise on it, once ``ambient`` is large.
    """
    if q <= 1.0:
        raise BadParameter("central blocks concern q > 1")
    parts = partition_counts(reps, REPS_PER_PART)
    args = [(q, c, rng.child(i), ambient, size) for i, c in enumerate(parts)]
    counts = np.concatenate(run_partitioned(_central_counts_worker, args, pool))
    return _counts_pmf(counts, count_cap)


@dataclass(frozen=True)
class SizeBiasRow:
    n: int
    estimate: EstimateReport

    def to_dict(self) -> dict:
        return {"n": self.n, **self.estimate.to_dict()}


@dataclass(frozen=True)
class SizeBiasReport:
    """Covering-block means against the size-biased limit E(T^2)/E(T)."""

    q: float
    rows: tuple
    reference: EstimateReport
    seed: int

    @property
    def converged(self) -> bool:
        """Largest size agrees with the reference within 3 combined SE."""
        last = self.rows[-1]
        return abs(last.estimate.value - self.reference.value) <= 3 * combined_se(
            last.estimate.se, self.reference.se
        )

    def to_dict(self) -> dict:
        return {
            "q": self.q,
            "rows": [r.to_dict() for r in self.rows],
            "reference": self.reference.to_dict(),
            "converged": self.converged,
            "seed": self.seed,
        }


def size_bias_convergence(
    q: float,
    sizes: Sequence[int],
    reps: int,
    rng: RngStream,
    ref_samples: int = 200_000,
    pool=None,
) -> SizeBiasReport:
    """Check that covering-block lengths approach the size-biased mean.

    The reference ratio E(T^2)/E(T) is estimated from plain block lengths
    (same law, no size bias) with a batch-means SE; q < 1 uses excursions,
    q > 1 uses doubled pair-ring returns at 1/q.
    """
    from .regen import covering_block_length, excursion_lengths, pair_chain_return_times

    if q <= 0 or q == 1.0:
        raise BadParameter("size-bias checks need q in (0,1) or q > 1")
    if q < 1.0:
        lengths = excursion_lengths(q, ref_samples, rng.child(1_000_000)).astype(
            np.float64
        )
    else:
        lengths = 2.0 * pair_chain_return_times(
            1.0 / q, ref_samples, rng.child(1_000_000)
        )
    ratio = float(np.mean(lengths**2) / np.mean(lengths))
    ratio_se = float(
        batch_statistic_se(lengths, lambda p: np.mean(p**2) / np.mean(p))
    )
    reference = EstimateReport(
        "size_biased_mean", ratio, ratio_se, len(lengths)
    )
    rows = []
    for j, n in enumerate(sorted(int(s) for s in sizes)):
        rows.append(SizeBiasRow(n, covering_block_length(q, n, reps, rng.child(j))))
    return SizeBiasReport(q, tuple(rows), reference, rng.seed)


# ---------------------------------------------------------------------------
# goodness of fit against the exact oracle
# ---------------------------------------------------------------------------


def lex_index_batch(images: np.ndarray) -> np.ndarray:
    """Lexicographic rank of each row among all permutations of its size."""
    images = np.asarray(images)
    reps, n = images.shape
    idx = np.zeros(reps, dtype=np.int64)
    fact = 1
    facts = [1] * n
    for i in range(n - 2, -1, -1):
        fact *= n - 1 - i
        facts[i] = fact
    for i in range(n):
        smaller_later = np.zeros(reps, dtype=np.int64)
        for j in range(i + 1, n):
            smaller_later += images[:, j] < images[:, i]
        idx += smaller_later * facts[i]
    return idx


def _cell_counts_worker(args) -> np.ndarray:
    q, n, count, stream = args
    cells = math.factorial(n)
    out = np.zeros(cells, dtype=np.int64)
    rows_per = max(1, (1 << 22) // max(n, 1))
    done = 0
    while done < count:
        rows = min(rows_per, count - done)
        batch = sample_finite_batch(n, q, rows, stream)
        out += np.bincount(lex_index_batch(batch), minlength=cells)
        done += rows
    return out


def chi_square_vs_exact(
    q: float, n: int, reps: int, rng: RngStream, pool=None
) -> dict:
    """Pearson chi-square of sampled permutations against exact probabilities.

    Every one of the n! outcomes is its own cell; suitable for n <= 6 or so.
    Returns the statistic, degrees of freedom, p-value, and worst expected
    cell count (as a sanity check on the test's own validity).
    """
    if n < 1 or n > 7:
        raise BadParameter("full-table chi-square needs 1 <= n <= 7")
    dist = exact_distribution(n, q)
    parts = partition_counts(reps, max(REPS_PER_PART * 50, 1))
    args = [(q, n, c, rng.child(i), ) for i, c in enumerate(parts)]
    counts = sum(run_partitioned(_cell_counts_worker, args, pool))
    expected = dist.probabilities * reps
    chisq = float(np.sum((counts - expected) ** 2 / expected))
    df = expected.shape[0] - 1
    return {
        "q": q,
        "n": n,
        "reps": reps,
        "chi_square": chisq,
        "df": df,
        "p_value": float(sps.chi2.sf(chisq, df)),
        "min_expected": float(expected.min()),
    }
