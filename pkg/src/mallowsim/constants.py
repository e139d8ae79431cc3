"""Limit constants of cycle statistics: closed q-series formulas and the
regenerative Monte Carlo estimators they are compared against.

Per-position limits of cycle counts exist for fixed q != 1 and are expressed
through block averages of the regenerative decompositions: with T the length
of a generic interior block and C_i its count of i-cycles,

    alpha_i = E(C_i) / E(T),
    beta_ij = Cov(C_i - alpha_i T, C_j - alpha_j T) / E(T),

estimated here from i.i.d. harvested blocks (excursions for q < 1, interior
pair rings for q > 1, where only even cycle sizes occur).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from ._kernels import cycle_lengths_reps
from .errors import BadParameter, Diverges, ExcursionTooLong
from .parallel import (
    BLOCKS_PER_PART,
    EXCURSIONS_PER_PART,
    partition_counts,
    run_partitioned,
)
from .regen import DEFAULT_STEP_CAP
from .report import batch_statistic_se
from .rng import RngStream
from .sampler import _advance, _check_q_unit, _GeometricBuffer, sample_finite_batch


@dataclass(frozen=True)
class QSeriesValue:
    """A truncated q-series evaluation with an explicit error bound."""

    value: float
    terms_used: int
    truncation_bound: float


def q_pochhammer(a: float, q: float, terms: Optional[int] = None, tol: float = 1e-14) -> QSeriesValue:
    """Product of (1 - a q^i) for i = 0..terms-1, or i -> infinity.

    The infinite product requires |q| < 1 (raises :class:`Diverges`
    otherwise) and stops once the remaining relative error is below ``tol``;
    the achieved bound is reported on the result.
    """
    a, q = float(a), float(q)
    if terms is not None:
        terms = int(terms)
        if terms < 0:
            raise BadParameter("terms must be non-negative")
        value = 1.0
        for i in range(terms):
            value *= 1.0 - a * q**i
        return QSeriesValue(value, terms, 0.0)
    if abs(q) >= 1.0 and a != 0.0:
        raise Diverges(f"infinite product needs |q| < 1, got q={q}")
    if a == 0.0:
        return QSeriesValue(1.0, 0, 0.0)
    value = 1.0
    aq = abs(a)
    i = 0
    while True:
        value *= 1.0 - a * q**i
        i += 1
        head = aq * abs(q) ** i
        if head >= 1.0:
            continue
        bound = head / ((1.0 - abs(q)) * (1.0 - head))
        if bound < tol:
            return QSeriesValue(value, i, bound)
        if i > 1_000_000:
            raise Diverges("product failed to converge; q too close to 1")


def stationary_mu(q: float, j_max: Optional[int] = None, tol: float = 1e-12) -> np.ndarray:
    """Stationary pmf of the bookkeeping chain, mu_j for j = 0..j_max.

    mu_j is proportional to q^j / (q;q)_j, normalised so the masses sum to 1
    over all j >= 0 (the normaliser is (q;q)_infinity by Euler's identity).
    ``j_max=None`` picks the smallest truncation whose tail is below ``tol``;
    an explicit ``j_max`` that cannot reach ``tol`` raises
    :class:`BadParameter`.
    """
    q = _check_q_unit(q)
    if j_max is None:
        j_max = max(1, math.ceil(math.log(tol * (1.0 - q)) / math.log(q)) + 1)
    j_max = int(j_max)
    if j_max < 0:
        raise BadParameter("j_max must be non-negative")
    norm = q_pochhammer(q, q, None, tol=min(tol, 1e-14)).value
    out = np.empty(j_max + 1, dtype=np.float64)
    poch = 1.0
    qj = 1.0
    for j in range(j_max + 1):
        out[j] = norm * qj / poch
        qj *= q
        poch *= 1.0 - q ** (j + 1)
    tail = 1.0 - float(np.sum(out))
    if tail > tol:
        raise BadParameter(
            f"tail mass {tail:.3g} above tolerance {tol}; increase j_max"
        )
    return out


def alpha1(q: float, tol: float = 1e-14) -> QSeriesValue:
    """Limiting fixed-point density alpha_1 for q < 1, by its closed q-series.

    alpha_1 = ((1-q)/q) * (q;q)_inf * sum_j q^((j+1)^2) / (q;q)_j^2,
    truncated when the next term drops below ``tol`` times the running sum.
    """
    q = _check_q_unit(q)
    s = 0.0
    poch = 1.0
    j = 0
    while True:
        s += q ** ((j + 1) ** 2) / (poch * poch)
        j += 1
        poch *= 1.0 - q**j
        nxt = q ** ((j + 1) ** 2) / (poch * poch)
        if nxt < tol * s or j > 100_000:
            ratio = q ** (2 * j + 3) / (1.0 - q ** (j + 1)) ** 2
            tail = nxt / (1.0 - ratio) if ratio < 1.0 else float("inf")
            break
    prod = q_pochhammer(q, q, None, tol=tol)
    value = (1.0 - q) / q * prod.value * s
    bound = tail / s + prod.truncation_bound
    return QSeriesValue(value, j, bound)


# ---------------------------------------------------------------------------
# Monte Carlo estimators
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ConstantsReport:
    """Estimated renewal constants with batch-means standard errors.

    ``alpha[k]`` and ``beta[k][l]`` refer to ``cycle_sizes[k]``-cycles (sizes
    1..i_max for kind "renewal", even sizes 2..2*i_max for kind "symmetric").
    ``tail_length_fraction`` is the share of block length carried by cycles
    longer than the table tracks; the tracked alphas plus this tail close to
    1 exactly.
    """

    kind: str
    q: float
    mu: float
    alpha: np.ndarray
    beta: np.ndarray
    beta_total: float
    cycle_sizes: tuple
    tail_length_fraction: float
    standard_errors: dict
    sample_count: int
    seed: int
    stream_id: int
    worker_count: int

    def to_json_dict(self) -> dict:
        return {
            "kind": self.kind,
            "q": self.q,
            "mu": self.mu,
            "alpha": [float(a) for a in self.alpha],
            "beta": [[float(b) for b in row] for row in self.beta],
            "beta_total": self.beta_total,
            "cycle_sizes": list(self.cycle_sizes),
            "tail_length_fraction": self.tail_length_fraction,
            "standard_errors": self.standard_errors,
            "sample_count": self.sample_count,
            "seed": self.seed,
            "stream_id": self.stream_id,
            "worker_count": self.worker_count,
        }


def _stats_vector(rows: np.ndarray) -> np.ndarray:
    """Point estimates from block rows [length, counts..., total, tail_len].

    Returns the flat vector [mu, alpha..., beta.ravel()..., beta_total,
    tail_length_fraction]; used both globally and per batch for SEs.
    """
    T = rows[:, 0]
    C = rows[:, 1:-2]
    tot = rows[:, -2]
    tail = rows[:, -1]
    denom = max(rows.shape[0] - 1, 1)
    mu = float(np.mean(T))
    alpha = C.mean(axis=0) / mu
    resid = C - np.outer(T, alpha)
    beta = (resid.T @ resid) / denom / mu
    alpha_tot = float(np.mean(tot)) / mu
    rtot = tot - alpha_tot * T
    beta_total = float(rtot @ rtot) / denom / mu
    tail_frac = float(np.mean(tail)) / mu
    return np.concatenate([[mu], alpha, beta.ravel(), [beta_total], [tail_frac]])


def _build_report(
    kind: str,
    q: float,
    rows: np.ndarray,
    cycle_sizes: tuple,
    rng: RngStream,
    worker_count: int,
    nbatches: int,
) -> ConstantsReport:
    k = len(cycle_sizes)
    point = _stats_vector(rows)
    ses = batch_statistic_se(rows, _stats_vector, nbatches=nbatches)

    def unpack(v):
        mu = float(v[0])
        alpha = np.asarray(v[1 : 1 + k])
        beta = np.asarray(v[1 + k : 1 + k + k * k]).reshape(k, k)
        return mu, alpha, beta, float(v[-2]), float(v[-1])

    mu, alpha, beta, beta_total, tail_frac = unpack(point)
    mu_se, alpha_se, beta_se, beta_total_se, tail_se = unpack(ses)
    return ConstantsReport(
        kind=kind,
        q=q,
        mu=mu,
        alpha=alpha,
        beta=beta,
        beta_total=beta_total,
        cycle_sizes=cycle_sizes,
        tail_length_fraction=tail_frac,
        standard_errors={
            "mu": mu_se,
            "alpha": [float(a) for a in alpha_se],
            "beta": [[float(b) for b in row] for row in beta_se],
            "beta_total": beta_total_se,
            "tail_length_fraction": tail_se,
        },
        sample_count=rows.shape[0],
        seed=rng.seed,
        stream_id=rng.stream_id,
        worker_count=worker_count,
    )


def _excursion_rows_worker(args) -> np.ndarray:
    """One partition of excursion harvesting: rows of block summaries."""
    q, count, stream, i_max, max_steps = args
    rows = np.zeros((count, i_max + 3), dtype=np.float64)
    geom = _GeometricBuffer(q, stream)
    for r in range(count):
        values: list = []
        unused: list = []
        unseen = 1
        while True:
            if len(values) >= max_steps:
                raise ExcursionTooLong(f"excursion exceeded {max_steps} steps")
            unseen = _advance(values, unused, unseen, geom.next())
            if not unused:
                break
        T = len(values)
        rows[r, 0] = T
        seen = bytearray(T)
        total = 0
        short_mass = 0
        for start in range(T):
            if seen[start]:
                continue
            length = 0
            p = start
            while not seen[p]:
                seen[p] = 1
                length += 1
                p = values[p] - 1
            total += 1
            if length <= i_max:
                rows[r, length] += 1.0
                short_mass += length
        rows[r, -2] = total
        rows[r, -1] = T - short_mass
    return rows


def estimate_renewal_constants(
    q: float,
    count: int,
    rng: RngStream,
    i_max: int = 10,
    max_steps: int = DEFAULT_STEP_CAP,
    nbatches: int = 50,
    pool=None,
    worker_count: int = 1,
) -> ConstantsReport:
    """Estimate (mu, alpha, beta) from ``count`` i.i.d. excursions, q < 1.

    Work is split into fixed partitions fed by child streams, so results are
    identical whether ``pool`` is None or a process pool of any size.
    """
    q = _check_q_unit(q)
    if count < 2:
        raise BadParameter("need at least 2 excursions")
    if i_max < 1:
        raise BadParameter("i_max must be >= 1")
    parts = partition_counts(count, EXCURSIONS_PER_PART)
    args = [
        (q, c, rng.child(i), i_max, max_steps) for i, c in enumerate(parts)
    ]
    rows = np.vstack(run_partitioned(_excursion_rows_worker, args, pool))
    return _build_report(
        "renewal",
        q,
        rows,
        tuple(range(1, i_max + 1)),
        rng,
        worker_count,
        nbatches,
    )


def _symmetric_rows_worker(args) -> np.ndarray:
    """One partition of interior pair-ring harvesting (ambient q > 1).

    Cycles are attributed to rings by the depth of their smallest position,
    so no relabelling is needed; ring cycles always alternate between the two
    sides of the ring, hence only even lengths occur.
    """
    q, count, stream, i_max, ambient = args
    n = ambient
    batch_rows = max(1, (1 << 21) // max(n, 1))
    collected: list = []
    have = 0
    sizes2 = 2.0 * np.arange(1, i_max + 1, dtype=np.float64)
    while have < count:
        batch = sample_finite_batch(n, q, batch_rows, stream)
        for r in range(batch.shape[0]):
            arr = batch[r]
            half = n // 2
            ks = np.arange(1, half + 1, dtype=np.int64)
            pmin = np.minimum.accumulate(arr[:half])
            smax = np.maximum.accumulate(arr[::-1][:half])
            cuts = ks[(pmin == n - ks + 1) & (smax == ks)]
            if cuts.shape[0] < 2:
                continue
            lengths, anchors = cycle_lengths_reps(arr)
            depth = np.minimum(anchors, n + 1 - anchors)
            ridx = np.searchsorted(cuts, depth, side="left")
            nr = cuts.shape[0]
            table = np.zeros((nr + 1, i_max + 3), dtype=np.float64)
            np.add.at(table[:, -2], ridx, 1.0)
            halves = lengths // 2
            sel = (lengths % 2 == 0) & (halves >= 1) & (halves <= i_max)
            np.add.at(table, (ridx[sel], halves[sel]), 1.0)
            table[:nr, 0] = 2.0 * np.diff(cuts, prepend=0)
            table[:, -1] = table[:, 0] - table[:, 1 : i_max + 1] @ sizes2
            interior = table[1:nr]
            collected.append(interior)
            have += interior.shape[0]
    rows = np.vstack(collected)
    return rows[:count]


def estimate_symmetric_constants(
    q: float,
    count: int,
    rng: RngStream,
    i_max: int = 10,
    ambient: Optional[int] = None,
    nbatches: int = 50,
    pool=None,
    worker_count: int = 1,
) -> ConstantsReport:
    """Estimate (mu, alpha, beta) from interior pair rings, ambient q > 1.

    ``count`` interior rings are harvested from samples of size ``ambient``
    (default 4001), discarding each sample's outermost ring and central block.
    ``alpha[k]`` refers to cycles of size ``2(k+1)``; odd sizes cannot occur.
    """
    if q <= 1.0:
        raise BadParameter("symmetric constants require q > 1")
    if count < 2:
        raise BadParameter("need at least 2 blocks")
    if i_max < 1:
        raise BadParameter("i_max must be >= 1")
    if ambient is None:
        ambient = 4001
    ambient = int(ambient)
    if ambient < 8:
        raise BadParameter("ambient size too small to contain interior rings")
    parts = partition_counts(count, BLOCKS_PER_PART)
    args = [(q, c, rng.child(i), i_max, ambient) for i, c in enumerate(parts)]
    rows = np.vstack(run_partitioned(_symmetric_rows_worker, args, pool))
    return _build_report(
        "symmetric",
        q,
        rows,
        tuple(2 * i for i in range(1, i_max + 1)),
        rng,
        worker_count,
        nbatches,
    )
